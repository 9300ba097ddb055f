//! Subalgebra closure: the span of all products of a generating set.
//!
//! A closure keeps two views of the same space. `spanning` holds the raw
//! products that enlarged the span (their coefficients stay polynomial in
//! `eta`), and an [`EchelonBasis`] holds a fully reduced basis used for
//! membership tests and coordinates.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{critical_values, AlgebraVector, Matsuo};
use crate::error::{Error, Result};
use crate::scalar::{is_special_eta, parse_rational, EtaScalar, Field, Rational};
use crate::space::FischerSpace;

/// How coefficients are handled: exactly in `Q(eta)` or at a fixed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Symbolic,
    Evaluated(Rational),
}

impl ScalarMode {
    pub fn label(&self) -> String {
        match self {
            ScalarMode::Symbolic => "symbolic".into(),
            ScalarMode::Evaluated(e) => format!("eta={e}"),
        }
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    /// `symbolic`, `eta=7`, `7`, `1/3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("symbolic") || s.eq_ignore_ascii_case("eta") {
            return Ok(ScalarMode::Symbolic);
        }
        let v = s.strip_prefix("eta=").or_else(|| s.strip_prefix("evaluated:")).unwrap_or(s);
        Ok(ScalarMode::Evaluated(parse_rational(v)?))
    }
}

/// Why a generator is in the list. Flip closures tag orbit vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Single,
    Double,
    Extra,
    Vector,
}

/// A generator with rational coefficients, usable in either scalar mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub vector: AlgebraVector<Rational>,
    pub role: Role,
}

impl Generator {
    pub fn new(vector: AlgebraVector<Rational>, role: Role) -> Self {
        Generator { vector, role }
    }

    pub fn point(p: usize) -> Self {
        Generator { vector: AlgebraVector::point(p), role: Role::Single }
    }

    /// `p + q` with `p, q` non-collinear.
    pub fn double(p: usize, q: usize) -> Self {
        Generator { vector: AlgebraVector::sum_of(&[p, q]), role: Role::Double }
    }

    /// Parses `b_{1,2} + c_{3,4} - 1/2*#5` against point labels.
    pub fn parse(space: &FischerSpace, s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty generator".into()));
        }
        // split into signed terms, ignoring signs inside braces
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut depth = 0i32;
        for ch in compact.chars() {
            match ch {
                '{' => depth += 1,
                '}' => depth -= 1,
                _ => {}
            }
            if depth == 0 && (ch == '+' || ch == '-') && !cur.ends_with('*') && !cur.ends_with('/') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        terms.push((neg, cur));
        for (neg, term) in terms {
            let (coeff, label) = match term.rsplit_once('*') {
                Some((c, l)) => (parse_rational(c)?, l.to_string()),
                None => (<Rational as Field>::one(), term),
            };
            let coeff = if neg { coeff.negated() } else { coeff };
            entries.push((space.find(&label)?, coeff));
        }
        let vector = AlgebraVector::from_entries(entries);
        let role = match vector.nnz() {
            1 if vector.entries()[0].1.is_one() => Role::Single,
            2 if vector.entries().iter().all(|e| e.1.is_one()) => Role::Double,
            _ => Role::Vector,
        };
        Ok(Generator { vector, role })
    }

    /// Several generators separated by `;`.
    pub fn parse_list(space: &FischerSpace, s: &str) -> Result<Vec<Self>> {
        s.split(';').filter(|t| !t.trim().is_empty()).map(|t| Generator::parse(space, t)).collect()
    }

    fn lift<F: Field>(&self) -> AlgebraVector<F> {
        AlgebraVector::from_entries(self.vector.entries().iter().map(|(k, c)| (*k, F::from_rational(c))))
    }
}

/// Pivot selection for [`EchelonBasis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Entry of least [`Field::weight`], ties to the smaller index.
    MinWeight,
    /// First nonzero entry; gives the unique reduced row echelon form.
    Leftmost,
}

const NO_ROW: u32 = u32::MAX;

/// A fully reduced echelon basis of a subspace of `F^ambient`.
///
/// Every row has coefficient one at its pivot and zero at every other
/// pivot, so reducing a vector takes a single pass. Rows are kept sorted
/// by pivot column.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    ambient: usize,
    rule: PivotRule,
    rows: Vec<AlgebraVector<F>>,
    pivots: Vec<usize>,
    slot: Vec<u32>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(ambient: usize, rule: PivotRule) -> Self {
        EchelonBasis { ambient, rule, rows: Vec::new(), pivots: Vec::new(), slot: vec![NO_ROW; ambient] }
    }

    pub fn from_vectors(ambient: usize, rule: PivotRule, vs: impl IntoIterator<Item = AlgebraVector<F>>) -> Self {
        let mut b = Self::new(ambient, rule);
        for v in vs {
            b.add(&v);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[AlgebraVector<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection onto the span along pivot columns.
    pub fn reduce(&self, v: &AlgebraVector<F>) -> AlgebraVector<F> {
        let hits: Vec<(usize, &F)> = v
            .entries()
            .iter()
            .filter(|(k, _)| self.slot[*k] != NO_ROW)
            .map(|(k, c)| (self.slot[*k] as usize, c))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        let mut dense = v.to_dense(self.ambient);
        for (r, c) in hits {
            for (k, x) in self.rows[r].entries() {
                dense[*k] = dense[*k].minus(&c.times(x));
            }
        }
        AlgebraVector::from_dense(dense)
    }

    pub fn contains(&self, v: &AlgebraVector<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns true if the dimension grew.
    pub fn add(&mut self, v: &AlgebraVector<F>) -> bool {
        let r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        self.insert_reduced(r);
        true
    }

    fn insert_reduced(&mut self, v: AlgebraVector<F>) {
        let (p, c) = match self.rule {
            PivotRule::Leftmost => v.entries()[0].clone(),
            PivotRule::MinWeight => {
                v.entries().iter().min_by_key(|(k, c)| (c.weight(), *k)).cloned().expect("nonzero vector")
            }
        };
        let inv = c.inverse().expect("pivot is nonzero");
        let v = v.scaled(&inv);
        for row in &mut self.rows {
            if let Some(x) = row.get(p) {
                let x = x.negated();
                *row = row.axpy(&x, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        for (r, &q) in self.pivots.iter().enumerate().skip(at) {
            self.slot[q] = r as u32;
        }
    }

    /// Coordinates of `v` in [`EchelonBasis::rows`]; `None` if outside.
    pub fn coordinates(&self, v: &AlgebraVector<F>) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v.coeff(p)).collect())
    }

    /// `sum c_i row_i`.
    pub fn combine(&self, coords: &[F]) -> AlgebraVector<F> {
        let mut dense = vec![F::zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (k, x) in row.entries() {
                dense[*k] = dense[*k].plus(&c.times(x));
            }
        }
        AlgebraVector::from_dense(dense)
    }

    /// The unique reduced row echelon basis of the same span.
    pub fn canonical(&self) -> Vec<AlgebraVector<F>> {
        if self.rule == PivotRule::Leftmost {
            return self.rows.clone();
        }
        Self::from_vectors(self.ambient, PivotRule::Leftmost, self.rows.iter().cloned()).rows
    }
}

/// Builder for closures of a generating set inside one Fischer space.
#[derive(Clone, Debug)]
pub struct Closure {
    space: Arc<FischerSpace>,
    generators: Vec<Generator>,
    container_dim: Option<usize>,
}

impl Closure {
    pub fn new(space: Arc<FischerSpace>, generators: Vec<Generator>) -> Self {
        Closure { space, generators, container_dim: None }
    }

    /// Dimension of a known subalgebra containing all generators. The
    /// worklist stops as soon as the span reaches it.
    pub fn container_dim(mut self, d: usize) -> Self {
        self.container_dim = Some(d);
        self
    }

    fn check(&self) -> Result<()> {
        let n = self.space.len();
        if self.generators.iter().any(|g| g.vector.max_index().is_some_and(|k| k >= n)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    fn limit(&self) -> usize {
        self.container_dim.unwrap_or(self.space.len()).min(self.space.len())
    }

    pub fn symbolic(&self) -> Result<Subalgebra<EtaScalar>> {
        self.check()?;
        let start = self.generators.iter().map(Generator::lift).collect();
        Subalgebra::build(self.space.clone(), EtaScalar::eta(), ScalarMode::Symbolic, self.generators.clone(), start, self.limit())
    }

    pub fn evaluated(&self, eta0: &Rational) -> Result<Subalgebra<Rational>> {
        self.check()?;
        let start = self.generators.iter().map(Generator::lift).collect();
        Subalgebra::build(
            self.space.clone(),
            eta0.clone(),
            ScalarMode::Evaluated(eta0.clone()),
            self.generators.clone(),
            start,
            self.limit(),
        )
    }

    pub fn run(&self, mode: &ScalarMode) -> Result<AnySubalgebra> {
        Ok(match mode {
            ScalarMode::Symbolic => AnySubalgebra::Symbolic(self.symbolic()?),
            ScalarMode::Evaluated(e) => AnySubalgebra::Evaluated(self.evaluated(e)?),
        })
    }
}

/// A subalgebra of `M_eta(space)` with its generators, raw spanning
/// products and reduced basis.
#[derive(Clone, Debug)]
pub struct Subalgebra<F: Field> {
    space: Arc<FischerSpace>,
    eta: F,
    mode: ScalarMode,
    generators: Vec<Generator>,
    spanning: Vec<AlgebraVector<F>>,
    basis: EchelonBasis<F>,
    container_dim: usize,
}

impl<F: Field> Subalgebra<F> {
    fn build(
        space: Arc<FischerSpace>,
        eta: F,
        mode: ScalarMode,
        generators: Vec<Generator>,
        start: Vec<AlgebraVector<F>>,
        container_dim: usize,
    ) -> Result<Self> {
        let m = Matsuo::new(&space, eta.clone())?;
        let mut basis = EchelonBasis::new(space.len(), PivotRule::MinWeight);
        let mut spanning: Vec<AlgebraVector<F>> = Vec::new();
        for v in start {
            if basis.add(&v) {
                spanning.push(v);
            }
        }
        // all products raw[j] * raw[k] with j <= k; the list grows as we go
        let mut k = 0;
        while k < spanning.len() && basis.dim() < container_dim {
            let products: Vec<AlgebraVector<F>> =
                (0..=k).into_par_iter().map(|j| m.product_unchecked(&spanning[j], &spanning[k])).collect();
            for p in products {
                if basis.dim() >= container_dim {
                    break;
                }
                if basis.add(&p) {
                    spanning.push(p);
                }
            }
            k += 1;
        }
        Ok(Subalgebra { space, eta, mode, generators, spanning, basis, container_dim })
    }

    /// The whole algebra, with the points as basis.
    pub fn whole(space: Arc<FischerSpace>, eta: F, mode: ScalarMode) -> Result<Self> {
        Matsuo::new(&space, eta.clone())?;
        let n = space.len();
        let points: Vec<AlgebraVector<F>> = (0..n).map(AlgebraVector::point).collect();
        let basis = EchelonBasis::from_vectors(n, PivotRule::MinWeight, points.iter().cloned());
        let generators = (0..n).map(Generator::point).collect();
        Ok(Subalgebra { space, eta, mode, generators, spanning: points, basis, container_dim: n })
    }

    pub fn space(&self) -> &Arc<FischerSpace> {
        &self.space
    }

    pub fn eta(&self) -> &F {
        &self.eta
    }

    pub fn mode(&self) -> &ScalarMode {
        &self.mode
    }

    pub fn algebra(&self) -> Matsuo<'_, F> {
        Matsuo::new(&self.space, self.eta.clone()).expect("parameter checked at construction")
    }

    pub fn dimension(&self) -> usize {
        self.basis.dim()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generators lifted into the coefficient field.
    pub fn generator_vectors(&self) -> Vec<AlgebraVector<F>> {
        self.generators.iter().map(Generator::lift).collect()
    }

    /// Products that enlarged the span, in discovery order.
    pub fn spanning(&self) -> &[AlgebraVector<F>] {
        &self.spanning
    }

    pub fn echelon(&self) -> &EchelonBasis<F> {
        &self.basis
    }

    /// Basis vectors, sorted by pivot.
    pub fn basis(&self) -> &[AlgebraVector<F>] {
        self.basis.rows()
    }

    pub fn canonical_basis(&self) -> Vec<AlgebraVector<F>> {
        self.basis.canonical()
    }

    pub fn contains(&self, v: &AlgebraVector<F>) -> bool {
        v.max_index().is_none_or(|k| k < self.space.len()) && self.basis.contains(v)
    }

    pub fn coordinates(&self, v: &AlgebraVector<F>) -> Result<Vec<F>> {
        if v.max_index().is_some_and(|k| k >= self.space.len()) {
            return Err(Error::SpaceMismatch);
        }
        self.basis.coordinates(v).ok_or(Error::NotInSubalgebra)
    }

    pub fn product(&self, u: &AlgebraVector<F>, v: &AlgebraVector<F>) -> Result<AlgebraVector<F>> {
        self.algebra().product(u, v)
    }

    /// True iff the span is closed under the product. Quadratic in the
    /// dimension; the closure guarantees it, so this is a check.
    pub fn is_closed(&self) -> bool {
        let m = self.algebra();
        let rows = self.basis();
        (0..rows.len()).into_par_iter().all(|i| (i..rows.len()).all(|j| self.basis.contains(&m.product_unchecked(&rows[i], &rows[j]))))
    }

    /// `c[i][j]` = coordinates of `basis[i] * basis[j]`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<F>>> {
        let m = self.algebra();
        let rows = self.basis();
        (0..rows.len())
            .into_par_iter()
            .map(|i| {
                (0..rows.len())
                    .map(|j| {
                        let p = m.product_unchecked(&rows[i], &rows[j]);
                        self.basis.coordinates(&p).expect("subalgebra is closed")
                    })
                    .collect()
            })
            .collect()
    }

    /// Sparse structure constants as CSV with header `i,j,k,coefficient`.
    pub fn write_structure_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "k", "coefficient"])?;
        for (i, row) in self.structure_constants().iter().enumerate() {
            for (j, coords) in row.iter().enumerate() {
                for (k, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        w.write_record([i.to_string(), j.to_string(), k.to_string(), c.to_string()])?;
                    }
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Closure of a subset of the generators, with the same parameter and
    /// container.
    pub fn sub_closure(&self, generator_indices: &[usize]) -> Result<Self> {
        let gens: Vec<Generator> = generator_indices
            .iter()
            .map(|&i| self.generators.get(i).cloned().ok_or_else(|| Error::InvalidParameters(format!("no generator {i}"))))
            .collect::<Result<_>>()?;
        let start = gens.iter().map(Generator::lift).collect();
        Self::build(self.space.clone(), self.eta.clone(), self.mode.clone(), gens, start, self.container_dim)
    }

    /// Tests whether the closures of the given generator groups split this
    /// subalgebra as a direct sum of mutually annihilating ideals.
    pub fn direct_sum(&self, parts: &[Vec<usize>]) -> Result<DirectSumReport> {
        let subs: Vec<Self> = parts.iter().map(|p| self.sub_closure(p)).collect::<Result<_>>()?;
        let dims: Vec<usize> = subs.iter().map(Subalgebra::dimension).collect();
        let joint = EchelonBasis::from_vectors(
            self.space.len(),
            PivotRule::MinWeight,
            subs.iter().flat_map(|s| s.basis().iter().cloned()),
        );
        let m = self.algebra();
        let mut annihilate = true;
        'outer: for a in 0..subs.len() {
            for b in a + 1..subs.len() {
                for u in subs[a].basis() {
                    for v in subs[b].basis() {
                        if !m.product_unchecked(u, v).is_zero() {
                            annihilate = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        let sum: usize = dims.iter().sum();
        Ok(DirectSumReport {
            part_dims: dims,
            total_dim: self.dimension(),
            independent: joint.dim() == sum,
            annihilating: annihilate,
            is_direct_sum: annihilate && joint.dim() == sum && sum == self.dimension(),
        })
    }

    pub fn export(&self) -> SubalgebraExport {
        let entries = |v: &AlgebraVector<F>| {
            v.entries()
                .iter()
                .map(|(k, c)| ExportEntry { index: *k, label: self.space.label(*k).to_string(), coeff: c.to_string() })
                .collect()
        };
        SubalgebraExport {
            space: self.space.id().to_string(),
            mode: self.mode.label(),
            dimension: self.dimension(),
            generators: self
                .generators
                .iter()
                .map(|g| ExportGenerator { role: g.role, vector: g.vector.display_with(&self.space) })
                .collect(),
            basis: self.basis().iter().map(entries).collect(),
            spanning_size: self.spanning.len(),
        }
    }
}

impl Subalgebra<EtaScalar> {
    /// The same generators closed at `eta = eta0`, seeded with the
    /// specialised raw products of the symbolic closure.
    pub fn specialize(&self, eta0: &Rational) -> Result<Subalgebra<Rational>> {
        let start = self.spanning.iter().map(|v| v.evaluate(eta0)).collect::<Result<Vec<_>>>()?;
        Subalgebra::build(
            self.space.clone(),
            eta0.clone(),
            ScalarMode::Evaluated(eta0.clone()),
            self.generators.clone(),
            start,
            self.container_dim,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumReport {
    pub part_dims: Vec<usize>,
    pub total_dim: usize,
    pub independent: bool,
    pub annihilating: bool,
    pub is_direct_sum: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportEntry {
    pub index: usize,
    pub label: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportGenerator {
    pub role: Role,
    pub vector: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubalgebraExport {
    pub space: String,
    pub mode: String,
    pub dimension: usize,
    pub generators: Vec<ExportGenerator>,
    pub basis: Vec<Vec<ExportEntry>>,
    pub spanning_size: usize,
}

/// A closure in either scalar mode.
#[derive(Clone, Debug)]
pub enum AnySubalgebra {
    Symbolic(Subalgebra<EtaScalar>),
    Evaluated(Subalgebra<Rational>),
}

impl AnySubalgebra {
    pub fn dimension(&self) -> usize {
        match self {
            AnySubalgebra::Symbolic(s) => s.dimension(),
            AnySubalgebra::Evaluated(s) => s.dimension(),
        }
    }

    pub fn mode(&self) -> &ScalarMode {
        match self {
            AnySubalgebra::Symbolic(s) => s.mode(),
            AnySubalgebra::Evaluated(s) => s.mode(),
        }
    }

    pub fn space(&self) -> &Arc<FischerSpace> {
        match self {
            AnySubalgebra::Symbolic(s) => s.space(),
            AnySubalgebra::Evaluated(s) => s.space(),
        }
    }

    pub fn export(&self) -> SubalgebraExport {
        match self {
            AnySubalgebra::Symbolic(s) => s.export(),
            AnySubalgebra::Evaluated(s) => s.export(),
        }
    }

    pub fn write_structure_csv<W: Write>(&self, out: W) -> Result<()> {
        match self {
            AnySubalgebra::Symbolic(s) => s.write_structure_csv(out),
            AnySubalgebra::Evaluated(s) => s.write_structure_csv(out),
        }
    }

    pub fn direct_sum(&self, parts: &[Vec<usize>]) -> Result<DirectSumReport> {
        match self {
            AnySubalgebra::Symbolic(s) => s.direct_sum(parts),
            AnySubalgebra::Evaluated(s) => s.direct_sum(parts),
        }
    }

    /// Basis vectors rendered with point labels.
    pub fn basis_strings(&self) -> Vec<String> {
        match self {
            AnySubalgebra::Symbolic(s) => s.basis().iter().map(|v| v.display_with(s.space())).collect(),
            AnySubalgebra::Evaluated(s) => s.basis().iter().map(|v| v.display_with(s.space())).collect(),
        }
    }
}

/// Dimensions of one closure computed twice: symbolically and at `eta0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub eta: String,
    pub symbolic_dim: usize,
    pub evaluated_dim: usize,
    pub agrees: bool,
}

/// True when `eta0` is neither special nor a critical value of the ambient
/// algebra, so that generic and specialised dimensions must agree.
pub fn is_safe_eta(space: &FischerSpace, eta0: &Rational) -> bool {
    !is_special_eta(eta0) && !critical_values(space).rational_roots.contains(eta0)
}

/// Compares the symbolic closure with the closure at `eta0`. Unsafe
/// parameters are refused unless `allow_unsafe`.
pub fn consistency_check(closure: &Closure, eta0: &Rational, allow_unsafe: bool) -> Result<ConsistencyReport> {
    if !allow_unsafe && !is_safe_eta(&closure.space, eta0) {
        return Err(Error::UnsafeEta(eta0.to_string()));
    }
    let s = closure.symbolic()?.dimension();
    let e = closure.evaluated(eta0)?.dimension();
    Ok(ConsistencyReport { eta: eta0.to_string(), symbolic_dim: s, evaluated_dim: e, agrees: s == e })
}

/// Groups generator indices by the connected component of the point
/// graph containing their support. Generators whose support meets several
/// components go into the part of the first one.
pub fn component_partition(space: &FischerSpace, generators: &[Generator]) -> Vec<Vec<usize>> {
    let comps = space.components();
    let mut comp_of = vec![0usize; space.len()];
    for (c, pts) in comps.iter().enumerate() {
        for &p in pts {
            comp_of[p] = c;
        }
    }
    let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, g) in generators.iter().enumerate() {
        let c = g.vector.support().map(|p| comp_of[p]).min().unwrap_or(0);
        parts.entry(c).or_default().push(i);
    }
    parts.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn space(spec: &str) -> Arc<FischerSpace> {
        Arc::new(FischerSpace::from_spec(spec).unwrap())
    }

    #[test]
    fn single_point_and_single_line() {
        let s = space("A:4");
        let c = Closure::new(s.clone(), vec![Generator::point(0)]);
        assert_eq!(c.symbolic().unwrap().dimension(), 1);
        let (p, q) = (s.find("b_{1,2}").unwrap(), s.find("b_{1,3}").unwrap());
        let c = Closure::new(s.clone(), vec![Generator::point(p), Generator::point(q)]);
        let a = c.symbolic().unwrap();
        assert_eq!(a.dimension(), 3);
        assert!(a.contains(&AlgebraVector::point(s.find("b_{2,3}").unwrap())));
        assert!(a.is_closed());
    }

    #[test]
    fn closure_is_idempotent() {
        let s = space("W2A:3");
        let gens = vec![Generator::point(0), Generator::point(3), Generator::point(5)];
        let a = Closure::new(s.clone(), gens).evaluated(&rat(7)).unwrap();
        let again: Vec<Generator> = a.basis().iter().map(|v| Generator::new(v.clone(), Role::Vector)).collect();
        let b = Closure::new(s, again).evaluated(&rat(7)).unwrap();
        assert_eq!(a.canonical_basis(), b.canonical_basis());
    }

    #[test]
    fn echelon_rows_are_reduced() {
        let s = space("W3A:3");
        let a = Closure::new(s.clone(), vec![Generator::point(0), Generator::point(4)]).symbolic().unwrap();
        let e = a.echelon();
        for (r, row) in e.rows().iter().enumerate() {
            for (q, &p) in e.pivots().iter().enumerate() {
                let c = row.coeff(p);
                assert_eq!(c.is_one(), r == q);
                assert!(r == q || c.is_zero());
            }
        }
        for v in a.spanning() {
            let coords = a.coordinates(v).unwrap();
            assert_eq!(&e.combine(&coords), v);
        }
    }

    #[test]
    fn generator_parsing() {
        let s = space("W2A:3");
        let g = Generator::parse(&s, "b_{1,2} + c_{1,3}").unwrap();
        assert_eq!(g.vector.nnz(), 2);
        let g = Generator::parse(&s, "1/2*b_{1,2} - c_{2,3}").unwrap();
        assert_eq!(g.role, Role::Vector);
        assert_eq!(g.vector.coeff(s.find("c_{2,3}").unwrap()), rat(-1));
        let list = Generator::parse_list(&s, "b_{1,2}; c_{1,3}").unwrap();
        assert_eq!(list.len(), 2);
        assert!(Generator::parse(&s, "z_{1,2}").is_err());
    }

    #[test]
    fn specialisation_matches_direct_closure() {
        let s = space("W3A:3");
        let c = Closure::new(s, vec![Generator::double(0, 8), Generator::point(3)]);
        let sym = c.symbolic().unwrap();
        let spec = sym.specialize(&rat(5)).unwrap();
        let direct = c.evaluated(&rat(5)).unwrap();
        assert_eq!(spec.canonical_basis(), direct.canonical_basis());
    }

    #[test]
    fn direct_sum_of_disjoint_points() {
        let s = space("A:4");
        let (p, q) = (s.find("b_{1,2}").unwrap(), s.find("b_{3,4}").unwrap());
        let a = Closure::new(s, vec![Generator::point(p), Generator::point(q)]).symbolic().unwrap();
        assert_eq!(a.dimension(), 2);
        let r = a.direct_sum(&[vec![0], vec![1]]).unwrap();
        assert!(r.is_direct_sum);
    }

    #[test]
    fn unsafe_eta_is_refused() {
        let s = space("A:3");
        let c = Closure::new(s, vec![Generator::point(0), Generator::point(1)]);
        assert!(matches!(consistency_check(&c, &rat(2), false), Err(Error::UnsafeEta(_))));
        let r = consistency_check(&c, &rat(2), true).unwrap();
        assert_eq!(r.symbolic_dim, 3);
        assert!(consistency_check(&c, &rat(7), false).unwrap().agrees);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("symbolic".parse::<ScalarMode>().unwrap(), ScalarMode::Symbolic);
        assert_eq!("eta=7".parse::<ScalarMode>().unwrap(), ScalarMode::Evaluated(rat(7)));
        assert!("eta=x".parse::<ScalarMode>().is_err());
    }
}
