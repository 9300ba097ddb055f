//! Exact scalars: rationals, polynomials in `eta`, and the field Q(eta).
//!
//! Everything the algebra code does is generic over [`Field`], which has two
//! implementations: [`EtaScalar`] (symbolic `eta`) and [`Rational`] (a
//! specialised `eta`).

mod eta;
mod parse;
mod poly;
mod roots;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use eta::{half_eta, EtaScalar};
pub use parse::{parse_eta_scalar, parse_rational};
pub use poly::{EtaPolynomial, IntPoly};
pub use roots::{rational_roots, rational_roots_int, square_free_part, square_free_int};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Exact field arithmetic shared by the symbolic and specialised engines.
///
/// Method names avoid `add`/`mul` so they never collide with `std::ops`.
pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn from_rational(r: &Rational) -> Self;

    /// Pivot heuristic: smaller means a cheaper pivot.
    fn weight(&self) -> usize;

    fn divided_by(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inverse()?))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Values of `eta` that are never legal Matsuo parameters.
pub fn is_forbidden_eta(eta0: &Rational) -> bool {
    Zero::is_zero(eta0) || One::is_one(eta0)
}

/// Values that make the double-axis eigenvalues collide or fall outside the
/// theory: 0, 1, 1/2, 2, -1.
pub fn is_special_eta(eta0: &Rational) -> bool {
    is_forbidden_eta(eta0) || *eta0 == ratio(1, 2) || *eta0 == rat(2) || *eta0 == rat(-1)
}
