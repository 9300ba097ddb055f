use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::poly::{EtaPolynomial, IntPoly};
use super::{Field, Rational};
use crate::error::{Error, Result};

/// An element of the rational-function field Q(eta).
///
/// Stored as `num / den` with `num, den` in Z[eta], coprime in Z[eta] and
/// `lc(den) > 0`. That form is unique, so derived equality and hashing are
/// structural. [`EtaScalar::monic_parts`] gives the equivalent
/// rational-coefficient form with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EtaScalar {
    num: IntPoly,
    den: IntPoly,
}

impl EtaScalar {
    /// The indeterminate `eta`.
    pub fn eta() -> Self {
        EtaScalar { num: IntPoly::eta(), den: IntPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(IntPoly::constant(BigInt::from(n)))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        EtaScalar { num: p, den: IntPoly::one() }
    }

    pub fn from_rational(r: &Rational) -> Self {
        EtaScalar {
            num: IntPoly::constant(r.numer().clone()),
            den: IntPoly::constant(r.denom().clone()),
        }
    }

    /// Builds `num / den`, reducing to canonical form.
    pub fn from_fraction(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero_value();
        }
        if den.is_one() {
            return EtaScalar { num, den };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        if den.leading().is_some_and(Signed::is_negative) {
            num = num.neg();
            den = den.neg();
        }
        EtaScalar { num, den }
    }

    fn zero_value() -> Self {
        EtaScalar { num: IntPoly::zero(), den: IntPoly::one() }
    }

    /// Integer-coefficient numerator of the canonical fraction.
    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    /// Integer-coefficient denominator of the canonical fraction.
    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    /// `(numerator, denominator)` over Q with a monic denominator.
    pub fn monic_parts(&self) -> (EtaPolynomial, EtaPolynomial) {
        let lc = Rational::from_integer(self.den.leading().unwrap().clone());
        let scale = |p: &IntPoly| {
            EtaPolynomial::from_coeffs(
                p.coeffs().iter().map(|c| Rational::from_integer(c.clone()) / &lc).collect(),
            )
        };
        (scale(&self.num), scale(&self.den))
    }

    /// True when the denominator is a constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Specialises at `eta = eta0`.
    pub fn evaluate(&self, eta0: &Rational) -> Result<Rational> {
        let d = self.den.eval(eta0);
        if Zero::is_zero(&d) {
            return Err(Error::Pole { eta: eta0.to_string() });
        }
        Ok(self.num.eval(eta0) / d)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            let n = self.num.coeffs().first().cloned().unwrap_or_default();
            Some(Rational::new(n, self.den.coeffs()[0].clone()))
        } else {
            None
        }
    }
}

impl Field for EtaScalar {
    fn zero() -> Self {
        Self::zero_value()
    }

    fn one() -> Self {
        EtaScalar { num: IntPoly::one(), den: IntPoly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn plus(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return EtaScalar { num, den: IntPoly::one() };
            }
            return Self::canonical(num, self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let (a_cof, b_cof) = if g.is_one() {
            (other.den.clone(), self.den.clone())
        } else {
            (other.den.div_exact(&g), self.den.div_exact(&g))
        };
        let num = self.num.mul(&a_cof).add(&other.num.mul(&b_cof));
        let den = self.den.mul(&a_cof);
        Self::canonical(num, den)
    }

    fn negated(&self) -> Self {
        EtaScalar { num: self.num.neg(), den: self.den.clone() }
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero_value();
        }
        if self.den.is_one() && other.den.is_one() {
            return EtaScalar { num: self.num.mul(&other.num), den: IntPoly::one() };
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = self.num.div_exact(&g1).mul(&other.num.div_exact(&g2));
        let den = self.den.div_exact(&g2).mul(&other.den.div_exact(&g1));
        let mut out = EtaScalar { num, den };
        if out.den.leading().is_some_and(Signed::is_negative) {
            out.num = out.num.neg();
            out.den = out.den.neg();
        }
        out
    }

    fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading().is_some_and(Signed::is_negative) {
            num = num.neg();
            den = den.neg();
        }
        Ok(EtaScalar { num, den })
    }

    fn from_rational(r: &Rational) -> Self {
        EtaScalar::from_rational(r)
    }

    fn weight(&self) -> usize {
        self.num.degree_or_zero() + self.den.degree_or_zero()
    }
}

impl fmt::Display for EtaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for EtaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EtaScalar({self})")
    }
}

impl FromStr for EtaScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_eta_scalar(s)
    }
}

impl From<i64> for EtaScalar {
    fn from(n: i64) -> Self {
        EtaScalar::from_int(n)
    }
}

impl Default for EtaScalar {
    fn default() -> Self {
        Self::zero_value()
    }
}

/// `eta / 2`, the off-diagonal Matsuo structure constant.
pub fn half_eta() -> EtaScalar {
    EtaScalar { num: IntPoly::eta(), den: IntPoly::constant(BigInt::from(2)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> EtaScalar {
        s.parse().unwrap()
    }

    #[test]
    fn halves_add_to_eta() {
        assert_eq!(half_eta().plus(&half_eta()), EtaScalar::eta());
    }

    #[test]
    fn division_cancels_common_factor() {
        let a = e("eta^2 - 4");
        let b = e("eta - 2");
        assert_eq!(a.divided_by(&b).unwrap(), e("eta + 2"));
    }

    #[test]
    fn square_of_half_eta() {
        assert_eq!(half_eta().times(&half_eta()), e("eta^2/4"));
        assert_eq!(half_eta().times(&half_eta()).to_string(), "(eta^2)/(4)");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(EtaScalar::eta().divided_by(&EtaScalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn evaluation_and_poles() {
        let q = Rational::new(1.into(), 3.into());
        assert_eq!(half_eta().evaluate(&Rational::from_integer(2.into())).unwrap(), <Rational as num_traits::One>::one());
        assert_eq!(half_eta().evaluate(&q).unwrap(), Rational::new(1.into(), 6.into()));
        let pole = e("1/(eta - 2)");
        assert!(matches!(pole.evaluate(&Rational::from_integer(2.into())), Err(Error::Pole { .. })));
    }

    #[test]
    fn monic_denominator_form() {
        let s = e("(eta^2 - 4)/(2*eta + 6)");
        let (n, d) = s.monic_parts();
        assert_eq!(d.coeffs().last().unwrap(), &<Rational as num_traits::One>::one());
        assert_eq!(n.to_string(), "(eta^2 - 4)/(2)");
        assert_eq!(d.to_string(), "eta + 3");
    }

    #[test]
    fn display_round_trips() {
        for s in ["(eta^2 - 4)/(2)", "-eta", "(3)/(eta^2 + 1)", "0", "7"] {
            let v = e(s);
            assert_eq!(v.to_string(), s);
            assert_eq!(e(&v.to_string()), v);
        }
    }
}
