//! Square-free parts and rational roots of polynomials in `eta`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{EtaPolynomial, IntPoly};
use super::Rational;
use crate::error::{Error, Result};

/// `f / gcd(f, f')` for an integer polynomial, primitive with positive
/// leading coefficient.
pub fn square_free_int(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::Domain("square-free part of the zero polynomial".into()));
    }
    let f = f.primitive();
    if f.is_constant() {
        return Ok(IntPoly::one());
    }
    let g = f.gcd(&f.derivative());
    Ok(f.div_exact(&g).primitive())
}

/// Square-free part of `p`, content-normalised to a primitive integer
/// polynomial with positive leading coefficient.
pub fn square_free_part(p: &EtaPolynomial) -> Result<EtaPolynomial> {
    if p.is_zero() {
        return Err(Error::Domain("square-free part of the zero polynomial".into()));
    }
    let (_, f) = p.clear_denominators();
    Ok(EtaPolynomial::from_int(&square_free_int(&f)?))
}

/// All rational roots of `p`, ascending.
pub fn rational_roots(p: &EtaPolynomial) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::Domain("rational roots of the zero polynomial".into()));
    }
    let (_, f) = p.clear_denominators();
    rational_roots_int(&f)
}

/// Rational roots of an integer polynomial via the rational-root theorem on
/// its square-free part: a root `a/b` in lowest terms has `a | trailing` and
/// `b | leading`.
pub fn rational_roots_int(f: &IntPoly) -> Result<Vec<Rational>> {
    let mut sf = square_free_int(f)?;
    let mut roots = BTreeSet::new();
    if sf.coeffs().first().is_some_and(Zero::is_zero) {
        roots.insert(Rational::zero());
        sf = sf.div_exact(&IntPoly::eta());
    }
    if sf.is_constant() {
        return Ok(roots.into_iter().collect());
    }
    let lc = sf.leading().unwrap().abs().to_biguint().unwrap();
    let tc = sf.coeffs()[0].abs().to_biguint().unwrap();
    // Cauchy bound on root magnitude.
    let lc_q = Rational::from_integer(BigInt::from(lc.clone()));
    let bound = sf
        .coeffs()
        .iter()
        .map(|c| Rational::from_integer(c.abs()) / &lc_q)
        .fold(Rational::zero(), |m, x| if x > m { x } else { m })
        + Rational::one();
    let numerators = divisors(&tc);
    let denominators = divisors(&lc);
    for b in &denominators {
        for a in &numerators {
            if a.gcd(b) != BigUint::one() {
                continue;
            }
            let r = Rational::new(BigInt::from(a.clone()), BigInt::from(b.clone()));
            if r > bound {
                continue;
            }
            for cand in [r.clone(), -r] {
                if is_root(&sf, &cand) {
                    roots.insert(cand);
                }
            }
        }
    }
    Ok(roots.into_iter().collect())
}

fn is_root(f: &IntPoly, x: &Rational) -> bool {
    // sum c_k p^k q^(d-k) == 0, no division needed
    let p = x.numer();
    let q = x.denom();
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for c in f.coeffs().iter().rev() {
        acc = acc * p + c * &qpow;
        qpow *= q;
    }
    acc.is_zero()
}

/// All positive divisors of `n` (n > 0).
pub(crate) fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Prime factorisation as `(prime, exponent)` pairs, ascending.
pub(crate) fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = std::collections::BTreeMap::new();
    let mut n = n.clone();
    if n.is_zero() {
        return Vec::new();
    }
    for p in 2u32..2000 {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            *out.entry(bp.clone()).or_insert(0) += 1;
            n /= &bp;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        match pollard_brent(&m) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => *out.entry(m).or_insert(0) += 1,
        }
    }
    out.into_iter().collect()
}

const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases; deterministic below
/// 3.3e24, overwhelmingly reliable beyond.
fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in MR_BASES {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for a in MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of a composite `n`, if Brent's rho finds one within
/// its iteration budget.
fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (BigUint::from(2u32), BigUint::from(2u32));
        let mut d = BigUint::one();
        let mut steps = 0u64;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
            steps += 1;
            if steps > 1 << 22 {
                break;
            }
        }
        if !d.is_one() && &d != n {
            return Some(d);
        }
        c += 1u32;
        if c.to_u32().is_some_and(|v| v > 50) {
            return None;
        }
    }
}
