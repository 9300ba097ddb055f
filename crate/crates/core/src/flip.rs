//! Flip involutions of Fischer spaces, their orbits, fixed subalgebras and
//! flip subalgebras.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::AlgebraVector;
use crate::axial::check_primitive;
use crate::closure::{Closure, Generator, Role, Subalgebra};
use crate::error::{Error, Result};
use crate::group::GroupAutomorphism;
use crate::scalar::{EtaScalar, Rational};
use crate::space::{Family, FischerSpace, Point, WreathElement};

/// The seven standard flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FlipKind {
    W2A,
    W3A,
    W2D,
    WrA4Inner,
    WrA4Outer,
    Wr3p2,
    Wr3x3,
}

impl FlipKind {
    pub const ALL: [FlipKind; 7] = [
        FlipKind::W2A,
        FlipKind::W3A,
        FlipKind::W2D,
        FlipKind::WrA4Inner,
        FlipKind::WrA4Outer,
        FlipKind::Wr3p2,
        FlipKind::Wr3x3,
    ];

    pub fn family(self) -> Family {
        match self {
            FlipKind::W2A => Family::W2A,
            FlipKind::W3A => Family::W3A,
            FlipKind::W2D => Family::W2D,
            FlipKind::WrA4Inner | FlipKind::WrA4Outer => Family::WrA4,
            FlipKind::Wr3p2 => Family::Wr3p2,
            FlipKind::Wr3x3 => Family::Wr3x3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FlipKind::W2A => "W2A",
            FlipKind::W3A => "W3A",
            FlipKind::W2D => "W2D",
            FlipKind::WrA4Inner => "WrA4-inner",
            FlipKind::WrA4Outer => "WrA4-outer",
            FlipKind::Wr3p2 => "Wr3p2",
            FlipKind::Wr3x3 => "Wr3x3",
        }
    }

    /// Dimension of the fixed subalgebra for `n = 2k`.
    pub fn fixed_dim_formula(self, k: usize) -> usize {
        match self {
            FlipKind::W2A => 2 * k * k,
            FlipKind::W3A => 3 * k * k - k,
            FlipKind::W2D => 4 * k * k - k,
            FlipKind::WrA4Inner => 12 * k * k - 4 * k,
            FlipKind::WrA4Outer => 12 * k * k - 3 * k,
            FlipKind::Wr3p2 => 27 * k * k - 9 * k,
            FlipKind::Wr3x3 => 9 * k * k - 3 * k,
        }
    }

    /// Stated numbers of singles, doubles and extras for `n = 2k`.
    pub fn orbit_formula(self, k: usize) -> OrbitCounts {
        let (s, d, e) = match self {
            FlipKind::W2A => (2 * k, 2 * (k * k - k), 0),
            FlipKind::W3A => (k, 3 * (k * k - k), k),
            FlipKind::W2D => (2 * k, 4 * k * k - 3 * k, 0),
            FlipKind::WrA4Inner => (4 * k, 12 * k * (k - 1), 4 * k),
            FlipKind::WrA4Outer => (6 * k, 12 * k * k - 9 * k, 0),
            FlipKind::Wr3p2 => (9 * k, 27 * k * (k - 1), 9 * k),
            FlipKind::Wr3x3 => (3 * k, 9 * k * (k - 1), 3 * k),
        };
        OrbitCounts { singles: s, doubles: d, extras: e }
    }

    /// Flip-subalgebra dimensions known for `k = 2`: `(generic, at eta = 2)`.
    pub fn known_flip_dims(self, k: usize) -> Option<(usize, usize)> {
        if k != 2 {
            // for some flips the equality with the fixed subalgebra holds
            // for every k
            return match self {
                FlipKind::W2A | FlipKind::W2D | FlipKind::WrA4Outer => {
                    let d = self.fixed_dim_formula(k);
                    Some((d, d))
                }
                _ => None,
            };
        }
        match self {
            FlipKind::W2A => Some((8, 8)),
            FlipKind::W2D => Some((14, 14)),
            FlipKind::WrA4Outer => Some((42, 42)),
            FlipKind::W3A => Some((9, 9)),
            FlipKind::Wr3x3 => Some((30, 29)),
            FlipKind::Wr3p2 => Some((90, 89)),
            FlipKind::WrA4Inner => None,
        }
    }
}

impl fmt::Display for FlipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FlipKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        Ok(match t.as_str() {
            "w2a" => FlipKind::W2A,
            "w3a" => FlipKind::W3A,
            "w2d" => FlipKind::W2D,
            "wra4" | "wra4-inner" | "a4-inner" => FlipKind::WrA4Inner,
            "wra4-outer" | "a4-outer" => FlipKind::WrA4Outer,
            "wr3p2" => FlipKind::Wr3p2,
            "wr3x3" => FlipKind::Wr3x3,
            _ => return Err(Error::NoStandardFlip(s.to_string())),
        })
    }
}

/// `pi = (1,2)(3,4)...` on positions `1..=n`, as a 1-based lookup.
fn pair_swap(n: usize) -> Vec<usize> {
    (0..=n).map(|i| if i == 0 { 0 } else if i % 2 == 1 { i + 1 } else { i - 1 }).collect()
}

/// The point whose wreath element is `x`, if any.
pub fn point_of_element(space: &FischerSpace, x: &WreathElement) -> Option<usize> {
    let m = space.base().order();
    let perm = x.as_slice();
    let first = perm.iter().enumerate().position(|(a, &b)| a as u32 != b)?;
    // the first moved slot is (identity, i); its image is (t, j)
    let i = first / m;
    let image = perm[first] as usize;
    let (j, t) = (image / m, image % m);
    if first % m != 0 || i == j {
        return None;
    }
    let p = space.index_of(Point::normalized(space.base(), t, i + 1, j + 1))?;
    (space.element(p) == *x).then_some(p)
}

/// An involutive automorphism of a Fischer space, as a point permutation.
#[derive(Clone, Debug)]
pub struct FlipInvolution {
    space: Arc<FischerSpace>,
    perm: Vec<usize>,
    kind: Option<FlipKind>,
    k: usize,
    tag: String,
}

impl FlipInvolution {
    /// A user-supplied permutation; checked to be an involutive automorphism.
    pub fn from_perm(space: Arc<FischerSpace>, perm: Vec<usize>, tag: impl Into<String>) -> Result<Self> {
        if perm.len() != space.len() || perm.iter().any(|&q| q >= space.len()) {
            return Err(Error::InvalidParameters("permutation has the wrong length".into()));
        }
        if (0..perm.len()).any(|p| perm[perm[p]] != p) {
            return Err(Error::NotInvolution);
        }
        if !space.is_automorphism(&perm) {
            return Err(Error::NotAutomorphism);
        }
        let k = space.n() / 2;
        Ok(FlipInvolution { space, perm, kind: None, k, tag: tag.into() })
    }

    /// The standard flip of a family on `n = 2k` positions.
    pub fn standard(kind: FlipKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameters("k must be positive".into()));
        }
        let space = Arc::new(FischerSpace::build_named(kind.family(), 2 * k)?);
        Self::standard_on(space, kind)
    }

    /// The standard flip on an already built space of the right family.
    pub fn standard_on(space: Arc<FischerSpace>, kind: FlipKind) -> Result<Self> {
        if space.family() != Some(kind.family()) || !space.n().is_multiple_of(2) {
            return Err(Error::NoStandardFlip(format!("{} on {}", kind, space.id())));
        }
        let perm = match kind {
            FlipKind::WrA4Inner => inner_conjugation(&space, "(1,2)(3,4)")?,
            _ => letter_map(&space, &letter_automorphism(&space, kind)?),
        };
        let mut f = Self::from_perm(space, perm, kind.as_str())?;
        f.kind = Some(kind);
        Ok(f)
    }

    pub fn space(&self) -> &Arc<FischerSpace> {
        &self.space
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn kind(&self) -> Option<FlipKind> {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn apply(&self, p: usize) -> usize {
        self.perm[p]
    }
}

/// The base-group automorphism used by a letter-swap flip.
fn letter_automorphism(space: &FischerSpace, kind: FlipKind) -> Result<GroupAutomorphism> {
    let g = space.base();
    let idx = |l: &str| g.index_of(l).ok_or_else(|| Error::UnknownPoint(l.to_string()));
    let images: Vec<(usize, usize)> = match kind {
        FlipKind::W2A | FlipKind::W3A => return Ok(GroupAutomorphism::identity(g)),
        FlipKind::W2D => vec![(idx("e")?, idx("f")?), (idx("f")?, idx("e")?)],
        FlipKind::WrA4Inner => {
            let s = idx("(1,2)(3,4)")?;
            return GroupAutomorphism::new(g, g.conjugation(s));
        }
        // conjugation by (3,4) in S4
        FlipKind::WrA4Outer => vec![(idx("(1,2,3)")?, idx("(1,2,4)")?), (idx("(1,2)(3,4)")?, idx("(1,2)(3,4)")?)],
        FlipKind::Wr3p2 => vec![(idx("u1v0w0")?, idx("u0v1w0")?), (idx("u0v1w0")?, idx("u1v0w0")?)],
        FlipKind::Wr3x3 => vec![(idx("u1v0")?, idx("u0v1")?), (idx("u0v1")?, idx("u1v0")?)],
    };
    let a = GroupAutomorphism::from_generator_images(g, &images)?;
    if !a.is_involution() {
        return Err(Error::NotInvolution);
    }
    Ok(a)
}

/// `t.(i,j) -> alpha(t).(i^pi, j^pi)`, normalised.
fn letter_map(space: &FischerSpace, alpha: &GroupAutomorphism) -> Vec<usize> {
    let pi = pair_swap(space.n());
    space
        .points()
        .iter()
        .map(|p| {
            let q = Point::normalized(space.base(), alpha.apply(p.t), pi[p.i], pi[p.j]);
            space.index_of(q).expect("image is a point")
        })
        .collect()
}

/// Conjugation of every point by `(s, s, ..., s) pi` in the wreath group.
fn inner_conjugation(space: &FischerSpace, s_label: &str) -> Result<Vec<usize>> {
    let g = space.base();
    let s = g.index_of(s_label).ok_or_else(|| Error::UnknownPoint(s_label.to_string()))?;
    let m = g.order();
    let n = space.n();
    let pi = pair_swap(n);
    let mut perm = vec![0u32; m * n];
    for k in 0..n {
        for x in 0..m {
            perm[k * m + x] = ((pi[k + 1] - 1) * m + g.mul(x, s)) as u32;
        }
    }
    let y = WreathElement::from_perm(perm);
    (0..space.len())
        .into_par_iter()
        .map(|p| point_of_element(space, &space.element(p).conjugate_by(&y)).ok_or(Error::NotAutomorphism))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCounts {
    pub singles: usize,
    pub doubles: usize,
    pub extras: usize,
}

impl OrbitCounts {
    pub fn orbits(&self) -> usize {
        self.singles + self.doubles + self.extras
    }
}

/// Orbits of a flip: fixed points, non-collinear pairs, collinear pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub singles: Vec<usize>,
    pub doubles: Vec<(usize, usize)>,
    pub extras: Vec<(usize, usize)>,
}

impl OrbitDecomposition {
    pub fn counts(&self) -> OrbitCounts {
        OrbitCounts { singles: self.singles.len(), doubles: self.doubles.len(), extras: self.extras.len() }
    }

    /// Orbit vectors: singles, then doubles, then extras.
    pub fn orbit_vectors(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = self.singles.iter().map(|&p| Generator::point(p)).collect();
        out.extend(self.doubles.iter().map(|&(p, q)| Generator::double(p, q)));
        out.extend(
            self.extras.iter().map(|&(p, q)| Generator::new(AlgebraVector::sum_of(&[p, q]), Role::Extra)),
        );
        out
    }
}

pub fn classify_orbits(tau: &FlipInvolution) -> OrbitDecomposition {
    let space = tau.space();
    let kinds: Vec<Option<(usize, bool)>> = (0..space.len())
        .into_par_iter()
        .map(|p| {
            let q = tau.apply(p);
            (p <= q).then(|| (q, space.collinear(p, q)))
        })
        .collect();
    let mut d = OrbitDecomposition { singles: Vec::new(), doubles: Vec::new(), extras: Vec::new() };
    for (p, k) in kinds.into_iter().enumerate() {
        match k {
            Some((q, _)) if q == p => d.singles.push(p),
            Some((q, true)) => d.extras.push((p, q)),
            Some((q, false)) => d.doubles.push((p, q)),
            None => {}
        }
    }
    d
}

/// Basis of the fixed subalgebra: one orbit vector per orbit.
pub fn fixed_subalgebra_basis(tau: &FlipInvolution) -> Vec<Generator> {
    classify_orbits(tau).orbit_vectors()
}

/// Closure of the singles and doubles, bounded by the fixed dimension.
pub fn flip_closure(tau: &FlipInvolution) -> Closure {
    let orbits = classify_orbits(tau);
    let fixed = orbits.counts().orbits();
    let gens: Vec<Generator> = orbits.orbit_vectors().into_iter().filter(|g| g.role != Role::Extra).collect();
    Closure::new(tau.space().clone(), gens).container_dim(fixed)
}

/// The fixed subalgebra as a [`Subalgebra`] spanned by all orbit vectors.
pub fn fixed_closure(tau: &FlipInvolution) -> Closure {
    let gens = fixed_subalgebra_basis(tau);
    let d = gens.len();
    Closure::new(tau.space().clone(), gens).container_dim(d)
}

/// True when products of orbit vectors stay in their span, over `Q(eta)`.
pub fn fixed_span_is_closed(tau: &FlipInvolution) -> Result<bool> {
    let gens = fixed_subalgebra_basis(tau);
    let d = gens.len();
    // no container bound: a product outside the span would grow the closure
    Ok(Closure::new(tau.space().clone(), gens).symbolic()?.dimension() == d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleEntry {
    pub evaluated: usize,
    pub specialized: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlipReport {
    pub family: String,
    pub k: usize,
    pub points: usize,
    pub singles: usize,
    pub doubles: usize,
    pub extras: usize,
    pub fixed_dim: usize,
    pub fixed_dim_formula: Option<usize>,
    pub stated_orbits: Option<OrbitCounts>,
    /// Dimension at the last requested `eta`, else the symbolic one.
    pub flip_dim: Option<usize>,
    pub flip_dim_symbolic: Option<usize>,
    pub flip_dims_at: BTreeMap<String, usize>,
    pub double_entry: BTreeMap<String, DoubleEntry>,
    pub flip_equals_fixed: Option<bool>,
    pub known_flip_dims: Option<(usize, usize)>,
    pub notes: Vec<String>,
}

impl FlipReport {
    /// Internal consistency: bookkeeping, formulas, double-entry
    /// agreement and flip dimension bounded by the fixed one.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.singles + 2 * (self.doubles + self.extras) != self.points {
            v.push("orbit bookkeeping fails".into());
        }
        if let Some(f) = self.fixed_dim_formula {
            if f != self.fixed_dim {
                v.push(format!("fixed dimension {} differs from formula {f}", self.fixed_dim));
            }
        }
        for (eta, d) in &self.double_entry {
            if !d.agree {
                v.push(format!("double entry disagrees at eta={eta}: {} vs {}", d.evaluated, d.specialized));
            }
        }
        if let Some((generic, at2)) = self.known_flip_dims {
            if let Some(d) = self.flip_dim_symbolic.filter(|&d| d != generic) {
                v.push(format!("flip dimension {d} over Q(eta), expected {generic}"));
            }
            if let Some(d) = self.flip_dims_at.get("2").filter(|&&d| d != at2) {
                v.push(format!("flip dimension {d} at eta=2, expected {at2}"));
            }
        }
        let dims = self.flip_dim_symbolic.iter().chain(self.flip_dims_at.values());
        for d in dims {
            if *d > self.fixed_dim {
                v.push(format!("flip dimension {d} exceeds fixed dimension {}", self.fixed_dim));
            }
        }
        v
    }
}

/// Options for [`flip_report`].
#[derive(Clone, Debug, Default)]
pub struct FlipReportOptions {
    pub symbolic: bool,
    pub etas: Vec<Rational>,
    /// Also specialise the symbolic closure at every requested `eta`.
    pub double_entry: bool,
}

pub fn flip_report(tau: &FlipInvolution, opts: &FlipReportOptions) -> Result<FlipReport> {
    let orbits = classify_orbits(tau);
    let counts = orbits.counts();
    let fixed_dim = counts.orbits();
    let closure = flip_closure(tau);
    let symbolic: Option<Subalgebra<EtaScalar>> =
        if opts.symbolic || opts.double_entry { Some(closure.symbolic()?) } else { None };
    let mut flip_dims_at = BTreeMap::new();
    let mut double_entry = BTreeMap::new();
    for eta in &opts.etas {
        let e = closure.evaluated(eta)?.dimension();
        flip_dims_at.insert(eta.to_string(), e);
        if let (true, Some(s)) = (opts.double_entry, &symbolic) {
            let sp = s.specialize(eta)?.dimension();
            double_entry.insert(eta.to_string(), DoubleEntry { evaluated: e, specialized: sp, agree: e == sp });
        }
    }
    let flip_dim_symbolic = symbolic.as_ref().map(Subalgebra::dimension);
    let flip_dim = opts.etas.last().map(|e| flip_dims_at[&e.to_string()]).or(flip_dim_symbolic);
    let mut notes = Vec::new();
    let kind = tau.kind();
    if kind == Some(FlipKind::Wr3x3) {
        notes.push(format!(
            "extras counted from orbits: {} (3k; a count of 9k = {} would break the dimension identity)",
            counts.extras,
            9 * tau.k()
        ));
    }
    if let Some(kd) = kind {
        if kd.known_flip_dims(tau.k()).is_none() {
            notes.push("flip dimension is computed here, with no reference value".into());
        }
    }
    Ok(FlipReport {
        family: tau.tag().to_string(),
        k: tau.k(),
        points: tau.space().len(),
        singles: counts.singles,
        doubles: counts.doubles,
        extras: counts.extras,
        fixed_dim,
        fixed_dim_formula: kind.map(|kd| kd.fixed_dim_formula(tau.k())),
        stated_orbits: kind.map(|kd| kd.orbit_formula(tau.k())),
        flip_dim,
        flip_dim_symbolic,
        flip_equals_fixed: flip_dim_symbolic.or_else(|| flip_dims_at.values().next().copied()).map(|d| d == fixed_dim),
        flip_dims_at,
        double_entry,
        known_flip_dims: kind.and_then(|kd| kd.known_flip_dims(tau.k())),
        notes,
    })
}

/// Checks that every double orbit vector is a primitive idempotent of the
/// fixed subalgebra, at `eta0`.
pub fn doubles_primitive_in_fixed(tau: &FlipInvolution, eta0: &Rational) -> Result<bool> {
    let orbits = classify_orbits(tau);
    let fixed = fixed_closure(tau).evaluated(eta0)?;
    for &(p, q) in &orbits.doubles {
        if !check_primitive(&fixed, &AlgebraVector::sum_of(&[p, q]))? {
            return Ok(false);
        }
    }
    Ok(true)
}
