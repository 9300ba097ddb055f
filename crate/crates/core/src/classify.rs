//! Type-D configurations: one single axis `a` and two double axes `b + c`,
//! `d + e`. Enumeration, closure dimensions, primitivity, and buckets by
//! canonical diagram.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{critical_values, AlgebraVector};
use crate::axial::check_primitive;
use crate::closure::{Closure, Generator, Subalgebra};
use crate::error::{Error, Result};
use crate::scalar::{is_special_eta, rat, Field, Rational};
use crate::space::{Diagram, DiagramCode, FischerSpace, SYMMETRIES};

/// Full enumeration is refused above this many points.
pub const FULL_ENUMERATION_LIMIT: usize = 40;

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "MATSUO_THREADS";

/// Note attached to primitive 9-dimensional algebras on connected diagrams.
pub const Q3_NOTE: &str = "Q3(eta) candidate";

/// Primitive dimensions accounted for by the classified diagrams and the
/// flip series.
pub const KNOWN_DIMS: [usize; 11] = [7, 9, 12, 13, 20, 29, 30, 39, 42, 89, 90];

/// `(a, {b, c}, {d, e})` stored canonically: `b < c`, `d < e`, `(b, c) < (d, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TypeDConfig {
    pub a: usize,
    pub bc: (usize, usize),
    pub de: (usize, usize),
}

impl TypeDConfig {
    /// Validates five distinct points with `b, c` and `d, e` non-collinear.
    pub fn new(space: &FischerSpace, a: usize, bc: (usize, usize), de: (usize, usize)) -> Result<Self> {
        space.diagram_of(a, bc, de)?;
        Ok(Self::canonical(a, bc, de))
    }

    fn canonical(a: usize, bc: (usize, usize), de: (usize, usize)) -> Self {
        let o = |(x, y): (usize, usize)| if x < y { (x, y) } else { (y, x) };
        let (bc, de) = (o(bc), o(de));
        let (bc, de) = if bc <= de { (bc, de) } else { (de, bc) };
        TypeDConfig { a, bc, de }
    }

    /// Support in role order `a, b, c, d, e`.
    pub fn points(&self) -> [usize; 5] {
        [self.a, self.bc.0, self.bc.1, self.de.0, self.de.1]
    }

    pub fn generators(&self) -> Vec<Generator> {
        vec![Generator::point(self.a), Generator::double(self.bc.0, self.bc.1), Generator::double(self.de.0, self.de.1)]
    }

    pub fn diagram(&self, space: &FischerSpace) -> Diagram {
        space.diagram_of(self.a, self.bc, self.de).expect("validated configuration")
    }

    /// Image under a point permutation of the ambient.
    pub fn mapped(&self, perm: &[usize]) -> Self {
        Self::canonical(perm[self.a], (perm[self.bc.0], perm[self.bc.1]), (perm[self.de.0], perm[self.de.1]))
    }

    /// The support rearranged by one of the eight role symmetries; the
    /// result is not canonicalised.
    pub fn permuted_support(&self, sym: &[usize; 5]) -> [usize; 5] {
        let p = self.points();
        let mut out = [0; 5];
        for (role, &img) in sym.iter().enumerate() {
            out[img] = p[role];
        }
        out
    }

    pub fn labels(&self, space: &FischerSpace) -> ConfigLabels {
        let l = |p: usize| space.label(p).to_string();
        ConfigLabels { a: l(self.a), b: l(self.bc.0), c: l(self.bc.1), d: l(self.de.0), e: l(self.de.1) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigLabels {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sampling {
    Full,
    Random { count: usize, seed: u64 },
}

/// One point per connected component: the Miyamoto involutions act
/// transitively on each component, so `a` can be fixed there.
pub fn axis_representatives(space: &FischerSpace) -> Vec<usize> {
    space.components().iter().map(|c| c[0]).collect()
}

fn orthogonal_pairs(space: &FischerSpace) -> Vec<(usize, usize)> {
    let n = space.len();
    (0..n).flat_map(|p| (p + 1..n).filter(move |&q| !space.collinear(p, q)).map(move |q| (p, q))).collect()
}

/// Configurations up to the role symmetries, with `a` restricted to
/// [`axis_representatives`]. Sorted.
pub fn enumerate_configs(space: &FischerSpace, sampling: &Sampling) -> Result<Vec<TypeDConfig>> {
    let reps = axis_representatives(space);
    let pairs = orthogonal_pairs(space);
    match *sampling {
        Sampling::Full => {
            if space.len() > FULL_ENUMERATION_LIMIT {
                return Err(Error::OversizedEnumeration { points: space.len(), limit: FULL_ENUMERATION_LIMIT });
            }
            let mut out = Vec::new();
            for &a in &reps {
                let avail: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(p, q)| p != a && q != a).collect();
                for (i, &bc) in avail.iter().enumerate() {
                    for &de in &avail[i + 1..] {
                        if de.0 != bc.0 && de.0 != bc.1 && de.1 != bc.0 && de.1 != bc.1 {
                            out.push(TypeDConfig { a, bc, de });
                        }
                    }
                }
            }
            Ok(out)
        }
        Sampling::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = BTreeSet::new();
            if pairs.len() < 2 {
                return Ok(Vec::new());
            }
            let attempts = count.saturating_mul(50).max(1000);
            for _ in 0..attempts {
                if found.len() >= count {
                    break;
                }
                let a = reps[rng.gen_range(0..reps.len())];
                let bc = pairs[rng.gen_range(0..pairs.len())];
                let de = pairs[rng.gen_range(0..pairs.len())];
                let pts = [a, bc.0, bc.1, de.0, de.1];
                let distinct = (0..5).all(|x| (0..x).all(|y| pts[x] != pts[y]));
                if distinct {
                    found.insert(TypeDConfig::canonical(a, bc, de));
                }
            }
            Ok(found.into_iter().collect())
        }
    }
}

/// Brute-force count of configurations with `a` among the representatives:
/// all ordered choices of `b, c, d, e`, divided by the eight symmetries.
pub fn count_configs_naive(space: &FischerSpace) -> usize {
    let n = space.len();
    let mut total = 0;
    for a in axis_representatives(space) {
        for b in 0..n {
            for c in 0..n {
                if [a, b].contains(&c) || b == a || space.collinear(b, c) {
                    continue;
                }
                for d in 0..n {
                    if [a, b, c].contains(&d) {
                        continue;
                    }
                    for e in 0..n {
                        if ![a, b, c, d].contains(&e) && !space.collinear(d, e) {
                            total += 1;
                        }
                    }
                }
            }
        }
    }
    total / 8
}

/// How a disconnected configuration was tested for decomposability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    /// Generators fall into mutually orthogonal groups.
    Generators,
    /// Some generator meets two diagram components; the algebra is tested
    /// for splitting along the subspaces those components generate.
    Supports,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumOutcome {
    pub kind: SplitKind,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigResult {
    pub config: TypeDConfig,
    pub code: u8,
    pub connected: bool,
    pub dim: usize,
    pub primitive: bool,
    pub direct_sum: Option<DirectSumOutcome>,
}

/// Points of the Fischer subspace generated by `pts`.
pub fn point_closure(space: &FischerSpace, pts: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = pts.iter().copied().collect();
    let mut frontier: Vec<usize> = set.iter().copied().collect();
    while let Some(p) = frontier.pop() {
        let current: Vec<usize> = set.iter().copied().collect();
        for q in current {
            if let Some(r) = space.third(p, q) {
                if set.insert(r) {
                    frontier.push(r);
                }
            }
        }
    }
    set.into_iter().collect()
}

/// True if every basis vector of `a`, restricted to each block, lies in
/// `a`, and the blocks are disjoint and mutually orthogonal. Then `a` is the
/// direct sum of its intersections with the block spans.
pub fn splits_along_blocks<F: Field>(a: &Subalgebra<F>, blocks: &[Vec<usize>]) -> bool {
    let space = a.space();
    for (i, x) in blocks.iter().enumerate() {
        for y in &blocks[i + 1..] {
            if x.iter().any(|&p| y.iter().any(|&q| p == q || space.collinear(p, q))) {
                return false;
            }
        }
    }
    let mut block_of = vec![usize::MAX; space.len()];
    for (i, b) in blocks.iter().enumerate() {
        for &p in b {
            block_of[p] = i;
        }
    }
    a.basis().iter().all(|v| {
        if v.support().any(|p| block_of[p] == usize::MAX) {
            return false;
        }
        (0..blocks.len()).all(|i| {
            let w = AlgebraVector::from_entries(v.entries().iter().filter(|(p, _)| block_of[*p] == i).cloned());
            w.is_zero() || a.contains(&w)
        })
    })
}

fn direct_sum_outcome<F: Field>(a: &Subalgebra<F>, cfg: &TypeDConfig, diagram: &Diagram) -> Result<DirectSumOutcome> {
    let comps = diagram.components();
    let comp_of = |role: usize| comps.iter().position(|c| c.contains(&role)).expect("role in a component");
    // generator roles: a = {0}, b + c = {1, 2}, d + e = {3, 4}
    let gen_roles: [&[usize]; 3] = [&[0], &[1, 2], &[3, 4]];
    let straddles = gen_roles.iter().any(|r| r.iter().any(|&x| comp_of(x) != comp_of(r[0])));
    if !straddles {
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (g, r) in gen_roles.iter().enumerate() {
            parts.entry(comp_of(r[0])).or_default().push(g);
        }
        let parts: Vec<Vec<usize>> = parts.into_values().collect();
        let report = a.direct_sum(&parts)?;
        return Ok(DirectSumOutcome { kind: SplitKind::Generators, passed: report.is_direct_sum });
    }
    let pts = cfg.points();
    let blocks: Vec<Vec<usize>> =
        comps.iter().map(|c| point_closure(a.space(), &c.iter().map(|&r| pts[r]).collect::<Vec<_>>())).collect();
    Ok(DirectSumOutcome { kind: SplitKind::Supports, passed: splits_along_blocks(a, &blocks) })
}

/// Closure, primitivity and (for disconnected diagrams) the direct-sum test
/// of one configuration at `eta0`.
pub fn evaluate_config(space: &Arc<FischerSpace>, cfg: &TypeDConfig, eta0: &Rational) -> Result<ConfigResult> {
    let a = Closure::new(space.clone(), cfg.generators()).evaluated(eta0)?;
    let diagram = cfg.diagram(space);
    let mut primitive = true;
    for g in a.generator_vectors() {
        if !check_primitive(&a, &g)? {
            primitive = false;
            break;
        }
    }
    let connected = diagram.is_connected();
    let direct_sum = if connected { None } else { Some(direct_sum_outcome(&a, cfg, &diagram)?) };
    Ok(ConfigResult { config: *cfg, code: diagram.canonical().0, connected, dim: a.dimension(), primitive, direct_sum })
}

/// The first safe value in `7, 11, 13, 17, ...` for this ambient.
pub fn default_search_eta(space: &FischerSpace) -> Rational {
    let crit = critical_values(space).rational_roots;
    [7i64, 11, 13, 17, 19, 23, 29, 31]
        .iter()
        .map(|&x| rat(x))
        .find(|e| !crit.contains(e) && !is_special_eta(e))
        .unwrap_or_else(|| rat(37))
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Search parameter; `None` picks [`default_search_eta`].
    pub eta: Option<Rational>,
    pub sampling: Sampling,
    /// Re-certify each distinct dimension of each bucket symbolically.
    pub certify: bool,
    /// Worker threads; `None` reads [`THREADS_ENV`], else rayon's default.
    pub threads: Option<usize>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { eta: None, sampling: Sampling::Full, certify: true, threads: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimEntry {
    pub dim: usize,
    pub count: usize,
    pub primitive_count: usize,
    pub sample_config: ConfigLabels,
    /// Set on the primitive 9-dimensional entries of connected buckets; the
    /// match with Q3(eta) is by dimension only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DirectSumStats {
    pub by_generators: usize,
    pub by_supports: usize,
    pub passed: usize,
    pub failed: usize,
    pub failed_primitive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bucket {
    pub diagram_code: String,
    pub edges: String,
    pub adjacency: Vec<Vec<u8>>,
    pub connected: bool,
    pub examined: usize,
    pub dims: Vec<DimEntry>,
    pub primitive_dims: Vec<usize>,
    pub direct_sum: Option<DirectSumStats>,
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub diagram_code: String,
    pub dim: usize,
    pub symbolic_dim: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub ambient: String,
    pub points: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub sampling: String,
    pub configs: usize,
    pub buckets: Vec<Bucket>,
    pub certifications: Vec<Certification>,
    pub unclassified: Vec<String>,
    pub violations: Vec<String>,
}

impl ClassificationReport {
    /// Primitive dimensions over connected buckets.
    pub fn connected_primitive_dims(&self) -> BTreeSet<usize> {
        self.buckets.iter().filter(|b| b.connected).flat_map(|b| b.primitive_dims.iter().copied()).collect()
    }

    /// Flattened buckets: one row per (bucket, dimension).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "diagram_code",
            "edges",
            "connected",
            "examined",
            "dim",
            "count",
            "primitive_count",
            "a",
            "b",
            "c",
            "d",
            "e",
        ])?;
        for b in &self.buckets {
            for d in &b.dims {
                let s = &d.sample_config;
                w.write_record([
                    b.diagram_code.clone(),
                    b.edges.clone(),
                    b.connected.to_string(),
                    b.examined.to_string(),
                    d.dim.to_string(),
                    d.count.to_string(),
                    d.primitive_count.to_string(),
                    s.a.clone(),
                    s.b.clone(),
                    s.c.clone(),
                    s.d.clone(),
                    s.e.clone(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn worker_count(opt: Option<usize>) -> Option<usize> {
    opt.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok())).filter(|&n| n > 0)
}

/// Runs `f` on a pool of the configured size.
pub fn with_workers<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match worker_count(threads) {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn classify(space: Arc<FischerSpace>, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let eta0 = opts.eta.clone().unwrap_or_else(|| default_search_eta(&space));
    let configs = enumerate_configs(&space, &opts.sampling)?;
    let results: Vec<ConfigResult> = with_workers(opts.threads, || {
        configs.par_iter().map(|c| evaluate_config(&space, c, &eta0)).collect::<Result<Vec<_>>>()
    })??;
    let mut by_code: BTreeMap<u8, Vec<&ConfigResult>> = BTreeMap::new();
    for r in &results {
        by_code.entry(r.code).or_default().push(r);
    }
    let mut buckets = Vec::new();
    let mut certifications = Vec::new();
    let mut unclassified = Vec::new();
    let mut violations = Vec::new();
    for (code, rs) in &by_code {
        let code = DiagramCode(*code);
        let diagram = code.diagram();
        let connected = diagram.is_connected();
        let mut dims: BTreeMap<usize, (usize, usize, Option<&ConfigResult>, Option<&ConfigResult>)> = BTreeMap::new();
        for r in rs {
            let e = dims.entry(r.dim).or_insert((0, 0, None, None));
            e.0 += 1;
            e.2.get_or_insert(r);
            if r.primitive {
                e.1 += 1;
                e.3.get_or_insert(r);
            }
        }
        let primitive_dims: Vec<usize> = dims.iter().filter(|(_, e)| e.1 > 0).map(|(d, _)| *d).collect();
        let direct_sum = (!connected).then(|| {
            let mut s = DirectSumStats::default();
            for r in rs {
                let o = r.direct_sum.expect("disconnected configs carry an outcome");
                match o.kind {
                    SplitKind::Generators => s.by_generators += 1,
                    SplitKind::Supports => s.by_supports += 1,
                }
                if o.passed {
                    s.passed += 1;
                } else {
                    s.failed += 1;
                    if r.primitive {
                        s.failed_primitive += 1;
                    }
                    if o.kind == SplitKind::Generators || r.primitive {
                        violations.push(format!(
                            "diagram {code}: configuration {:?} does not split as a direct sum",
                            r.config.labels(&space)
                        ));
                    }
                }
            }
            s
        });
        let label = (connected && primitive_dims.iter().any(|d| !KNOWN_DIMS.contains(d)))
            .then(|| "unclassified diagram (D8/D9 candidate)".to_string());
        if label.is_some() {
            unclassified.push(code.to_string());
        }
        if opts.certify {
            for (&dim, e) in &dims {
                let rep = e.3.or(e.2).expect("nonempty entry");
                let sym = Closure::new(space.clone(), rep.config.generators()).symbolic()?.dimension();
                if sym != dim {
                    violations.push(format!("diagram {code}: dimension {dim} at eta={eta0} but {sym} over Q(eta)"));
                }
                certifications.push(Certification { diagram_code: code.to_string(), dim, symbolic_dim: sym, agrees: sym == dim });
            }
        }
        let adj = diagram.adjacency();
        buckets.push(Bucket {
            diagram_code: code.to_string(),
            edges: code.edge_string(),
            adjacency: adj.iter().map(|row| row.iter().map(|&x| x as u8).collect()).collect(),
            connected,
            examined: rs.len(),
            dims: dims
                .iter()
                .map(|(&dim, e)| DimEntry {
                    dim,
                    count: e.0,
                    primitive_count: e.1,
                    sample_config: e.3.or(e.2).expect("nonempty entry").config.labels(&space),
                    note: (connected && dim == 9 && e.1 > 0).then(|| Q3_NOTE.to_string()),
                })
                .collect(),
            primitive_dims,
            direct_sum,
            label,
        });
    }
    let (seed, sampling) = match opts.sampling {
        Sampling::Full => (None, "full".to_string()),
        Sampling::Random { count, seed } => (Some(seed), format!("random({count})")),
    };
    Ok(ClassificationReport {
        ambient: space.id().to_string(),
        points: space.len(),
        mode: format!("eta={eta0}"),
        seed,
        sampling,
        configs: results.len(),
        buckets,
        certifications,
        unclassified,
        violations,
    })
}

/// Closure dimension of a support given in role order, for symmetry checks.
pub fn support_dimension(space: &Arc<FischerSpace>, support: [usize; 5], eta0: &Rational) -> Result<(usize, DiagramCode)> {
    let [a, b, c, d, e] = support;
    let gens = vec![Generator::point(a), Generator::double(b, c), Generator::double(d, e)];
    let dim = Closure::new(space.clone(), gens).evaluated(eta0)?.dimension();
    Ok((dim, space.diagram_of(a, (b, c), (d, e))?.canonical()))
}

/// All eight role symmetries of a configuration, as supports.
pub fn symmetric_supports(cfg: &TypeDConfig) -> Vec<[usize; 5]> {
    SYMMETRIES.iter().map(|s| cfg.permuted_support(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(spec: &str) -> Arc<FischerSpace> {
        Arc::new(FischerSpace::from_spec(spec).unwrap())
    }

    #[test]
    fn single_line_has_no_configs() {
        let s = space("A:3");
        assert!(enumerate_configs(&s, &Sampling::Full).unwrap().is_empty());
    }

    #[test]
    fn enumeration_matches_naive_count() {
        for spec in ["A:5", "W2A:3", "W3A:4"] {
            let s = space(spec);
            let full = enumerate_configs(&s, &Sampling::Full).unwrap();
            assert_eq!(full.len(), count_configs_naive(&s), "{spec}");
            assert!(full.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn oversized_full_enumeration_is_refused() {
        let s = space("Wr3p2:4");
        assert!(matches!(enumerate_configs(&s, &Sampling::Full), Err(Error::OversizedEnumeration { .. })));
        let a = enumerate_configs(&s, &Sampling::Random { count: 20, seed: 3 }).unwrap();
        let b = enumerate_configs(&s, &Sampling::Random { count: 20, seed: 3 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn symmetries_preserve_dimension_and_code() {
        let s = space("W3A:4");
        let eta = rat(7);
        for cfg in enumerate_configs(&s, &Sampling::Full).unwrap().iter().step_by(97) {
            let base = support_dimension(&s, cfg.points(), &eta).unwrap();
            for sup in symmetric_supports(cfg) {
                assert_eq!(support_dimension(&s, sup, &eta).unwrap(), base);
            }
        }
    }

    #[test]
    fn rejects_collinear_pairs() {
        let s = space("A:5");
        let (p, q) = (s.find("b_{1,2}").unwrap(), s.find("b_{1,3}").unwrap());
        let r = TypeDConfig::new(&s, s.find("b_{4,5}").unwrap(), (p, q), (0, 9));
        assert!(r.is_err());
    }
}
