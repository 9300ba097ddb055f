//! Univariate polynomials in `eta`.
//!
//! [`IntPoly`] is the workhorse: integer coefficients, used for every
//! fraction-free computation (gcd, Bareiss, determinants). [`EtaPolynomial`]
//! is the public rational-coefficient view.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Polynomial with integer coefficients, `coeffs[k]` multiplies `eta^k`.
/// No trailing zero coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `eta`.
    pub fn eta() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0, for weight heuristics.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn trailing(&self) -> Option<&BigInt> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn neg(&self) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        for (c, s) in coeffs.iter_mut().zip(&other.coeffs) {
            *c -= s;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divides every coefficient by `c`; `c` must divide each exactly.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        if c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero(), "inexact scalar division");
                    x / c
                })
                .collect(),
        }
    }

    /// Multiplies by `eta^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Gcd of the coefficients, always non-negative (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-remainder by zero polynomial");
        let lb = b.leading().unwrap().clone();
        let mut r = self.clone();
        let Some(da) = r.degree() else { return r };
        if da < db {
            return r;
        }
        let mut steps = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(dr - db));
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lb, steps));
        }
        r
    }

    /// Exact division; panics (debug) if `b` does not divide `self` in Z[eta].
    pub fn div_exact(&self, b: &Self) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        if b.is_one() {
            return self.clone();
        }
        if db == 0 {
            return self.div_scalar_exact(&b.coeffs[0]);
        }
        let Some(da) = self.degree() else { return Self::zero() };
        assert!(da >= db, "inexact polynomial division");
        let lb = b.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let top = &r[k + db];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(lb);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &qk * bc;
            }
            q[k] = qk;
        }
        debug_assert!(r.iter().all(Zero::is_zero), "inexact polynomial division");
        Self::from_coeffs(q)
    }

    /// Greatest common divisor in Z[eta], via the subresultant remainder
    /// sequence. Result has positive leading coefficient; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive().scale(&self.content());
        }
        let content = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return Self::constant(content);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        if a == b {
            return a.scale(&content);
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.is_constant() {
                return Self::constant(content);
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = r.div_scalar_exact(&divisor);
            g = a.leading().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                let num = num_traits::pow(g.clone(), delta);
                let den = num_traits::pow(h, delta - 1);
                num / den
            };
        }
        b.primitive().scale(&content)
    }

    /// Value at an integer point.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Value at a rational point, computed fraction-free as
    /// `sum c_k p^k q^(d-k) / q^d`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let Some(d) = self.degree() else { return Rational::zero() };
        let p = x.numer();
        let q = x.denom();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        // Horner on the homogenised form.
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        Rational::new(acc, num_traits::pow(q.clone(), d))
    }

    /// Sum of absolute coefficient bit lengths, a size measure.
    pub fn bit_size(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).sum()
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, mag: &BigInt, k: usize) -> fmt::Result {
    match (k, mag.is_one()) {
        (0, _) => write!(f, "{mag}"),
        (1, true) => write!(f, "eta"),
        (1, false) => write!(f, "{mag}*eta"),
        (_, true) => write!(f, "eta^{k}"),
        (_, false) => write!(f, "{mag}*eta^{k}"),
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_monomial(f, &mag, k)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Polynomial in `eta` with rational coefficients; index = degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EtaPolynomial {
    coeffs: Vec<Rational>,
}

impl EtaPolynomial {
    pub fn zero() -> Self {
        EtaPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        EtaPolynomial { coeffs }
    }

    pub fn from_int(p: &IntPoly) -> Self {
        EtaPolynomial {
            coeffs: p.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Splits into `(common denominator, integer polynomial)` with
    /// `self = poly / den`.
    pub fn clear_denominators(&self) -> (BigInt, IntPoly) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (den, IntPoly::from_coeffs(ints))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Scales to a monic polynomial; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lc) => EtaPolynomial {
                coeffs: self.coeffs.iter().map(|c| c / lc).collect(),
            },
        }
    }
}

impl fmt::Display for EtaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (den, p) = self.clear_denominators();
        if den.is_one() {
            write!(f, "{p}")
        } else {
            write!(f, "({p})/({den})")
        }
    }
}

impl fmt::Debug for EtaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EtaPolynomial({self})")
    }
}
