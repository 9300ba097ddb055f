//! The Matsuo algebra `M_eta` of a Fischer space: product, Frobenius form,
//! Gram matrix and critical values.

mod gram;
mod vector;

pub use gram::{
    adjacency_charpoly, adjacency_minimal_polynomial, critical_values, gram, gram_det_bareiss, radical_dim,
    CriticalValues, GramData,
};
pub use vector::AlgebraVector;

use crate::error::{Error, Result};
use crate::scalar::{half_eta, is_forbidden_eta, EtaScalar, Field, Rational};
use crate::space::FischerSpace;

/// Product and form of `M_eta(space)` over a coefficient field `F`:
/// [`EtaScalar`] for symbolic `eta`, [`Rational`] for a fixed value.
#[derive(Clone, Debug)]
pub struct Matsuo<'a, F> {
    space: &'a FischerSpace,
    eta: F,
    half: F,
}

impl<'a> Matsuo<'a, EtaScalar> {
    pub fn symbolic(space: &'a FischerSpace) -> Self {
        Matsuo { space, eta: EtaScalar::eta(), half: half_eta() }
    }
}

impl<'a> Matsuo<'a, Rational> {
    /// The algebra at `eta = eta0`; rejects `eta0` in `{0, 1}`.
    pub fn at(space: &'a FischerSpace, eta0: &Rational) -> Result<Self> {
        if is_forbidden_eta(eta0) {
            return Err(Error::DisallowedEta(eta0.to_string()));
        }
        Ok(Matsuo { space, eta: eta0.clone(), half: eta0 / Rational::from_integer(2.into()) })
    }
}

impl<'a, F: Field> Matsuo<'a, F> {
    /// The algebra with an arbitrary parameter in `F`; rejects `0` and `1`.
    pub fn new(space: &'a FischerSpace, eta: F) -> Result<Self> {
        if eta.is_zero() || eta.is_one() {
            return Err(Error::DisallowedEta(eta.to_string()));
        }
        let half = eta.divided_by(&F::from_i64(2))?;
        Ok(Matsuo { space, eta, half })
    }

    pub fn space(&self) -> &'a FischerSpace {
        self.space
    }

    pub fn eta(&self) -> &F {
        &self.eta
    }

    pub fn half_eta(&self) -> &F {
        &self.half
    }

    fn check(&self, u: &AlgebraVector<F>) -> Result<()> {
        match u.max_index() {
            Some(k) if k >= self.space.len() => Err(Error::SpaceMismatch),
            _ => Ok(()),
        }
    }

    /// `p * q` on basis points: `p` if equal, zero if non-collinear,
    /// `(eta/2)(p + q - r)` on a line `{p, q, r}`.
    pub fn point_product(&self, p: usize, q: usize) -> AlgebraVector<F> {
        if p == q {
            return AlgebraVector::point(p);
        }
        match self.space.third(p, q) {
            None => AlgebraVector::zero(),
            Some(r) => AlgebraVector::from_entries([
                (p, self.half.clone()),
                (q, self.half.clone()),
                (r, self.half.negated()),
            ]),
        }
    }

    /// Bilinear extension of [`Matsuo::point_product`].
    pub fn product(&self, u: &AlgebraVector<F>, v: &AlgebraVector<F>) -> Result<AlgebraVector<F>> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.product_unchecked(u, v))
    }

    pub(crate) fn product_unchecked(&self, u: &AlgebraVector<F>, v: &AlgebraVector<F>) -> AlgebraVector<F> {
        let (u, v) = if u.nnz() <= v.nnz() { (u, v) } else { (v, u) };
        if u.is_zero() {
            return AlgebraVector::zero();
        }
        let n = self.space.len();
        // diagonal terms and line terms accumulate separately; the line
        // part is scaled by eta/2 once at the end
        let mut diag: Vec<F> = vec![F::zero(); n];
        let mut line: Vec<F> = vec![F::zero(); n];
        let mut touched_line = false;
        let dense_v = v.to_dense(n);
        for (p, up) in u.entries() {
            let p = *p;
            if !dense_v[p].is_zero() {
                diag[p] = diag[p].plus(&up.times(&dense_v[p]));
            }
            let nb = self.space.neighbors(p);
            if nb.len() <= v.nnz() {
                for &q in nb {
                    let q = q as usize;
                    if dense_v[q].is_zero() {
                        continue;
                    }
                    let c = up.times(&dense_v[q]);
                    let r = self.space.third(p, q).expect("neighbour is collinear");
                    line[p] = line[p].plus(&c);
                    line[q] = line[q].plus(&c);
                    line[r] = line[r].minus(&c);
                    touched_line = true;
                }
            } else {
                for (q, vq) in v.entries() {
                    let Some(r) = self.space.third(p, *q) else { continue };
                    let c = up.times(vq);
                    line[p] = line[p].plus(&c);
                    line[*q] = line[*q].plus(&c);
                    line[r] = line[r].minus(&c);
                    touched_line = true;
                }
            }
        }
        if touched_line {
            for (d, l) in diag.iter_mut().zip(&line) {
                if !l.is_zero() {
                    *d = d.plus(&self.half.times(l));
                }
            }
        }
        AlgebraVector::from_dense(diag)
    }

    /// The Frobenius form: `(p, p) = 1`, `(p, q) = eta/2` on a line, else 0.
    pub fn frobenius(&self, u: &AlgebraVector<F>, v: &AlgebraVector<F>) -> Result<F> {
        self.check(u)?;
        self.check(v)?;
        let dense_v = v.to_dense(self.space.len());
        let mut diag = F::zero();
        let mut line = F::zero();
        for (p, up) in u.entries() {
            if !dense_v[*p].is_zero() {
                diag = diag.plus(&up.times(&dense_v[*p]));
            }
            for &q in self.space.neighbors(*p) {
                let vq = &dense_v[q as usize];
                if !vq.is_zero() {
                    line = line.plus(&up.times(vq));
                }
            }
        }
        Ok(diag.plus(&self.half.times(&line)))
    }

    /// True iff `u * u = u`.
    pub fn is_idempotent(&self, u: &AlgebraVector<F>) -> Result<bool> {
        Ok(self.product(u, u)? == *u)
    }
}
