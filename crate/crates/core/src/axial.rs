//! Axial axioms inside a subalgebra: eigenspaces of the adjoint of an axis,
//! fusion laws, primitivity and Miyamoto involutions.
//!
//! Vectors are handled in the subalgebra's basis coordinates and act as
//! rows: the adjoint matrix has row `i` equal to the coordinates of
//! `x * basis[i]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::AlgebraVector;
use crate::closure::Subalgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Field;
use crate::space::FischerSpace;

/// The eigenvalues that occur: `1, 0, eta, 2 eta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Eigen {
    One,
    Zero,
    TwoEta,
    Eta,
}

impl Eigen {
    pub fn value<F: Field>(self, eta: &F) -> F {
        match self {
            Eigen::One => F::one(),
            Eigen::Zero => F::zero(),
            Eigen::Eta => eta.clone(),
            Eigen::TwoEta => eta.plus(eta),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Eigen::One => "1",
            Eigen::Zero => "0",
            Eigen::TwoEta => "2eta",
            Eigen::Eta => "eta",
        }
    }
}

impl fmt::Display for Eigen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A fusion law over a subset of [`Eigen`] with a `Z/2` grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionLaw {
    name: &'static str,
    eigenvalues: Vec<Eigen>,
    table: BTreeMap<(Eigen, Eigen), Vec<Eigen>>,
    odd: Vec<Eigen>,
}

impl FusionLaw {
    fn from_cells(name: &'static str, eigenvalues: Vec<Eigen>, cells: &[(Eigen, Eigen, &[Eigen])], odd: Vec<Eigen>) -> Self {
        let mut table = BTreeMap::new();
        for &(a, b, c) in cells {
            table.insert((a, b), c.to_vec());
            table.insert((b, a), c.to_vec());
        }
        FusionLaw { name, eigenvalues, table, odd }
    }

    /// Jordan type `eta`: values `{1, 0, eta}`.
    pub fn jordan() -> Self {
        use Eigen::*;
        Self::from_cells(
            "J(eta)",
            vec![One, Zero, Eta],
            &[(One, One, &[One]), (One, Zero, &[]), (Zero, Zero, &[Zero]), (One, Eta, &[Eta]), (Zero, Eta, &[Eta]), (Eta, Eta, &[One, Zero])],
            vec![Eta],
        )
    }

    /// Monster type `(alpha, beta) = (2 eta, eta)`.
    pub fn monster() -> Self {
        use Eigen::*;
        Self::from_cells(
            "M(2eta,eta)",
            vec![One, Zero, TwoEta, Eta],
            &[
                (One, One, &[One]),
                (One, Zero, &[]),
                (One, TwoEta, &[TwoEta]),
                (One, Eta, &[Eta]),
                (Zero, Zero, &[Zero]),
                (Zero, TwoEta, &[TwoEta]),
                (Zero, Eta, &[Eta]),
                (TwoEta, TwoEta, &[One, Zero]),
                (TwoEta, Eta, &[Eta]),
                (Eta, Eta, &[One, Zero, TwoEta]),
            ],
            vec![Eta],
        )
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn eigenvalues(&self) -> &[Eigen] {
        &self.eigenvalues
    }

    pub fn fuse(&self, a: Eigen, b: Eigen) -> &[Eigen] {
        self.table.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    pub fn is_odd(&self, e: Eigen) -> bool {
        self.odd.contains(&e)
    }

    /// Rejects parameters where the law is undefined or its values merge.
    pub fn check_parameter<F: Field>(&self, eta: &F) -> Result<()> {
        if eta.is_zero() || eta.is_one() {
            return Err(Error::DisallowedEta(eta.to_string()));
        }
        let vals: Vec<F> = self.eigenvalues.iter().map(|e| e.value(eta)).collect();
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                if vals[i] == vals[j] {
                    return Err(Error::SpectrumCollision(eta.to_string()));
                }
            }
        }
        Ok(())
    }
}

impl FromStr for FusionLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "J" | "JORDAN" | "J(ETA)" => Ok(FusionLaw::jordan()),
            "M" | "MONSTER" | "M(2ETA,ETA)" => Ok(FusionLaw::monster()),
            other => Err(Error::Parse(format!("unknown fusion law {other:?}"))),
        }
    }
}

/// Matrix of `ad_x` in the basis of `a`.
pub fn adjoint_matrix<F: Field>(a: &Subalgebra<F>, x: &AlgebraVector<F>) -> Result<Matrix<F>> {
    if !a.contains(x) {
        return Err(Error::NotInSubalgebra);
    }
    let m = a.algebra();
    let rows = a
        .basis()
        .par_iter()
        .map(|b| a.coordinates(&m.product(x, b)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Eigenspaces of `ad_x` for the values of a fusion law.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<F: Field> {
    pub axis: AlgebraVector<F>,
    /// Per eigenvalue, basis vectors of the eigenspace in coordinates.
    pub parts: Vec<(Eigen, Vec<Vec<F>>)>,
    /// Inverse of the matrix whose rows are all eigenvectors in order.
    change: Matrix<F>,
}

impl<F: Field> EigenDecomposition<F> {
    pub fn dims(&self) -> BTreeMap<String, usize> {
        self.parts.iter().map(|(e, v)| (e.label().to_string(), v.len())).collect()
    }

    pub fn dim(&self, e: Eigen) -> usize {
        self.parts.iter().find(|p| p.0 == e).map_or(0, |p| p.1.len())
    }

    /// Eigenvectors of one part as algebra vectors.
    pub fn vectors(&self, a: &Subalgebra<F>, e: Eigen) -> Vec<AlgebraVector<F>> {
        let part = self.parts.iter().find(|p| p.0 == e).map_or(&[][..], |p| p.1.as_slice());
        part.iter().map(|c| a.echelon().combine(c)).collect()
    }

    /// Coordinates of a vector (in subalgebra coordinates) along the
    /// eigenvector basis.
    fn eigen_coords(&self, c: &[F]) -> Vec<F> {
        self.change.apply_row(c)
    }

    fn ranges(&self) -> Vec<(Eigen, std::ops::Range<usize>)> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|(e, v)| {
                let r = start..start + v.len();
                start += v.len();
                (*e, r)
            })
            .collect()
    }
}

/// Decomposes `a` into eigenspaces of `ad_x`. Fails with
/// [`Error::NonDiagonalizable`] when the eigenspaces do not fill `a`.
pub fn eigen_decompose<F: Field>(a: &Subalgebra<F>, x: &AlgebraVector<F>, law: &FusionLaw) -> Result<EigenDecomposition<F>> {
    law.check_parameter(a.eta())?;
    let m = a.algebra();
    if !m.is_idempotent(x)? {
        return Err(Error::Domain("axis is not an idempotent".into()));
    }
    let ad = adjoint_matrix(a, x)?;
    let parts: Vec<(Eigen, Vec<Vec<F>>)> =
        law.eigenvalues().iter().map(|&e| (e, ad.shifted(&e.value(a.eta())).left_kernel())).collect();
    let found: usize = parts.iter().map(|p| p.1.len()).sum();
    if found != a.dimension() {
        return Err(Error::NonDiagonalizable { found, expected: a.dimension() });
    }
    let p = Matrix::from_rows(parts.iter().flat_map(|(_, v)| v.iter().cloned()).collect());
    let change = if found == 0 { p.clone() } else { p.inverse()? };
    Ok(EigenDecomposition { axis: x.clone(), parts, change })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub lambda: String,
    pub mu: String,
    pub pair: (usize, usize),
    pub offending_component: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub axis: String,
    pub law: String,
    pub eigen_dims: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

/// Checks `A_lambda A_mu` against the law on every pair of eigenvectors.
pub fn check_fusion<F: Field>(a: &Subalgebra<F>, dec: &EigenDecomposition<F>, law: &FusionLaw) -> Result<FusionReport> {
    let m = a.algebra();
    let vecs: Vec<(Eigen, Vec<AlgebraVector<F>>)> = dec.parts.iter().map(|(e, _)| (*e, dec.vectors(a, *e))).collect();
    let ranges = dec.ranges();
    let mut tasks = Vec::new();
    for (pi, (l, us)) in vecs.iter().enumerate() {
        for (l2, vs) in vecs.iter().skip(pi) {
            for iu in 0..us.len() {
                let from = if l == l2 { iu } else { 0 };
                for iv in from..vs.len() {
                    tasks.push((*l, *l2, pi, iu, iv));
                }
            }
        }
    }
    let idx = |e: Eigen| vecs.iter().position(|p| p.0 == e).expect("eigenvalue present");
    let found: Vec<Vec<Violation>> = tasks
        .par_iter()
        .map(|&(l, mu, pi, iu, iv)| -> Result<Vec<Violation>> {
            let u = &vecs[pi].1[iu];
            let v = &vecs[idx(mu)].1[iv];
            let w = a.coordinates(&m.product(u, v)?)?;
            let e = dec.eigen_coords(&w);
            let allowed = law.fuse(l, mu);
            Ok(ranges
                .iter()
                .filter(|(nu, r)| !allowed.contains(nu) && e[r.clone()].iter().any(|c| !c.is_zero()))
                .map(|(nu, _)| Violation {
                    lambda: l.label().into(),
                    mu: mu.label().into(),
                    pair: (iu, iv),
                    offending_component: nu.label().into(),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let violations: Vec<Violation> = found.into_iter().flatten().collect();
    Ok(FusionReport {
        axis: dec.axis.display_with(a.space()),
        law: law.name().into(),
        eigen_dims: dec.dims(),
        passed: violations.is_empty(),
        violations,
    })
}

/// Decomposition followed by the fusion check.
pub fn verify_axis<F: Field>(a: &Subalgebra<F>, x: &AlgebraVector<F>, law: &FusionLaw) -> Result<FusionReport> {
    let dec = eigen_decompose(a, x, law)?;
    check_fusion(a, &dec, law)
}

/// True iff the 1-eigenspace of `ad_x` in `a` is one-dimensional.
pub fn check_primitive<F: Field>(a: &Subalgebra<F>, x: &AlgebraVector<F>) -> Result<bool> {
    let ad = adjoint_matrix(a, x)?;
    Ok(ad.shifted(&F::one()).left_kernel().len() == 1)
}

/// True iff the product of `(ad_x - lambda)` over the law's values is zero,
/// i.e. the minimal polynomial of `ad_x` divides it.
pub fn adjoint_annihilated<F: Field>(a: &Subalgebra<F>, x: &AlgebraVector<F>, law: &FusionLaw) -> Result<bool> {
    let ad = adjoint_matrix(a, x)?;
    let mut acc = Matrix::identity(a.dimension());
    for e in law.eigenvalues() {
        acc = acc.mul(&ad.shifted(&e.value(a.eta())));
    }
    Ok(acc.is_zero())
}

/// The Miyamoto involution of a point on the Fischer space: fixes `p` and
/// its non-neighbours, swaps the other two points of each line through `p`.
pub fn miyamoto_point_map(space: &FischerSpace, p: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..space.len()).collect();
    for &q in space.neighbors(p) {
        let q = q as usize;
        perm[q] = space.third(p, q).expect("neighbour is collinear");
    }
    perm
}

/// A linear map of a subalgebra, as a matrix acting on coordinate rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiyamotoMap<F: Field> {
    pub matrix: Matrix<F>,
}

impl<F: Field> MiyamotoMap<F> {
    /// The linear extension of a point permutation, on a subalgebra whose
    /// span is invariant under it.
    pub fn from_point_perm(a: &Subalgebra<F>, perm: &[usize]) -> Result<Self> {
        let rows = a
            .basis()
            .iter()
            .map(|b| {
                let img = AlgebraVector::from_entries(b.entries().iter().map(|(k, c)| (perm[*k], c.clone())));
                a.coordinates(&img)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MiyamotoMap { matrix: Matrix::from_rows(rows) })
    }

    pub fn apply(&self, a: &Subalgebra<F>, v: &AlgebraVector<F>) -> Result<AlgebraVector<F>> {
        let c = a.coordinates(v)?;
        Ok(a.echelon().combine(&self.matrix.apply_row(&c)))
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        MiyamotoMap { matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn is_involution(&self) -> bool {
        let n = self.matrix.rows();
        self.matrix.mul(&self.matrix) == Matrix::identity(n)
    }

    /// Checks `t(b_i) t(b_j) = t(b_i b_j)` on all basis pairs.
    pub fn is_automorphism(&self, a: &Subalgebra<F>) -> Result<bool> {
        let m = a.algebra();
        let basis = a.basis();
        let images: Vec<AlgebraVector<F>> = (0..basis.len()).map(|i| a.echelon().combine(self.matrix.row(i))).collect();
        let pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|i| (i..basis.len()).map(move |j| (i, j))).collect();
        let ok = pairs
            .par_iter()
            .map(|&(i, j)| -> Result<bool> {
                let lhs = m.product(&images[i], &images[j])?;
                let rhs = self.apply(a, &m.product(&basis[i], &basis[j])?)?;
                Ok(lhs == rhs)
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(ok.into_iter().all(|b| b))
    }

    /// Checks `(t u, t v) = (u, v)` on all basis pairs.
    pub fn preserves_form(&self, a: &Subalgebra<F>) -> Result<bool> {
        let m = a.algebra();
        let basis = a.basis();
        let images: Vec<AlgebraVector<F>> = (0..basis.len()).map(|i| a.echelon().combine(self.matrix.row(i))).collect();
        for i in 0..basis.len() {
            for j in i..basis.len() {
                if m.frobenius(&images[i], &images[j])? != m.frobenius(&basis[i], &basis[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The Miyamoto involution of `x`: identity on the even part of the law's
/// grading, minus one on the odd part. Requires the fusion check to pass.
pub fn miyamoto_algebra_map<F: Field>(a: &Subalgebra<F>, x: &AlgebraVector<F>, law: &FusionLaw) -> Result<MiyamotoMap<F>> {
    let dec = eigen_decompose(a, x, law)?;
    let report = check_fusion(a, &dec, law)?;
    if !report.passed {
        return Err(Error::FusionFailure(format!("{} violations of {}", report.violations.len(), law.name())));
    }
    let d = a.dimension();
    let p = Matrix::from_rows(dec.parts.iter().flat_map(|(_, v)| v.iter().cloned()).collect());
    let mut diag = Matrix::zeros(d, d);
    let mut k = 0;
    for (e, v) in &dec.parts {
        let s = if law.is_odd(*e) { F::one().negated() } else { F::one() };
        for _ in v {
            diag.set(k, k, s.clone());
            k += 1;
        }
    }
    Ok(MiyamotoMap { matrix: dec.change.mul(&diag).mul(&p) })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::closure::{Closure, Generator, ScalarMode};
    use crate::scalar::{rat, ratio, EtaScalar, Rational};

    fn line() -> Subalgebra<EtaScalar> {
        let s = Arc::new(FischerSpace::from_spec("A:3").unwrap());
        Subalgebra::whole(s, EtaScalar::eta(), ScalarMode::Symbolic).unwrap()
    }

    #[test]
    fn point_axis_on_a_line() {
        let a = line();
        let x = AlgebraVector::point(0);
        let dec = eigen_decompose(&a, &x, &FusionLaw::jordan()).unwrap();
        assert_eq!((dec.dim(Eigen::One), dec.dim(Eigen::Zero), dec.dim(Eigen::Eta)), (1, 1, 1));
        assert!(check_fusion(&a, &dec, &FusionLaw::jordan()).unwrap().passed);
        assert!(check_primitive(&a, &x).unwrap());
        assert!(adjoint_annihilated(&a, &x, &FusionLaw::jordan()).unwrap());
    }

    #[test]
    fn miyamoto_on_a_line_matches_points() {
        let a = line();
        let perm = miyamoto_point_map(a.space(), 0);
        assert_eq!(perm, vec![0, 2, 1]);
        let from_points = MiyamotoMap::from_point_perm(&a, &perm).unwrap();
        let from_eigen = miyamoto_algebra_map(&a, &AlgebraVector::point(0), &FusionLaw::jordan()).unwrap();
        assert_eq!(from_points, from_eigen);
        assert!(from_eigen.is_involution());
        assert!(from_eigen.is_automorphism(&a).unwrap());
        assert!(from_eigen.preserves_form(&a).unwrap());
    }

    #[test]
    fn double_axis_is_not_primitive_in_the_whole_algebra() {
        let s = Arc::new(FischerSpace::from_spec("A:4").unwrap());
        let (p, q) = (s.find("b_{1,2}").unwrap(), s.find("b_{3,4}").unwrap());
        let a = Subalgebra::whole(s, EtaScalar::eta(), ScalarMode::Symbolic).unwrap();
        let x = AlgebraVector::sum_of(&[p, q]);
        assert!(!check_primitive(&a, &x).unwrap());
        assert!(verify_axis(&a, &x, &FusionLaw::monster()).unwrap().passed);
        // the double axis is not of Jordan type: 2eta occurs
        assert!(matches!(eigen_decompose(&a, &x, &FusionLaw::jordan()), Err(Error::NonDiagonalizable { .. })));
    }

    #[test]
    fn parameter_domain() {
        let s = Arc::new(FischerSpace::from_spec("A:3").unwrap());
        let a: Subalgebra<Rational> =
            Closure::new(s, vec![Generator::point(0), Generator::point(1)]).evaluated(&ratio(1, 2)).unwrap();
        let x = AlgebraVector::point(0);
        assert!(matches!(eigen_decompose(&a, &x, &FusionLaw::monster()), Err(Error::SpectrumCollision(_))));
        assert!(eigen_decompose(&a, &x, &FusionLaw::jordan()).is_ok());
        assert!(FusionLaw::monster().check_parameter(&rat(1)).is_err());
        assert_eq!("M".parse::<FusionLaw>().unwrap(), FusionLaw::monster());
    }

    #[test]
    fn fusion_table_is_symmetric() {
        for law in [FusionLaw::jordan(), FusionLaw::monster()] {
            for &a in law.eigenvalues() {
                for &b in law.eigenvalues() {
                    assert_eq!(law.fuse(a, b), law.fuse(b, a));
                }
            }
        }
    }
}
