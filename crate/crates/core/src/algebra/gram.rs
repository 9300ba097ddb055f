//! Gram matrix of the Frobenius form and its determinant in `eta`.
//!
//! With `A` the collinearity adjacency matrix, the Gram matrix is
//! `I + (eta/2) A`, so `2^N det G = det(2I + eta A) = prod (2 + eta lambda)`
//! over the eigenvalues of `A`. The determinant is computed two ways: Bareiss
//! elimination over `Z[eta]` (small spaces) and from the characteristic
//! polynomial of `A`, found modulo word-sized primes and lifted by CRT.
//! Because `A` is symmetric its minimal polynomial is square-free, which
//! gives the critical-value certificate without factoring.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{half_eta, is_forbidden_eta, EtaScalar, Field, IntPoly, Rational};
use crate::space::FischerSpace;

fn ez() -> EtaScalar {
    <EtaScalar as Field>::zero()
}

/// Gram matrix and determinant of `M_eta(space)`.
#[derive(Clone, Debug)]
pub struct GramData {
    pub matrix: Vec<Vec<EtaScalar>>,
    /// Primitive part of `det(2I + eta A)`, positive leading coefficient.
    pub det: IntPoly,
}

/// Size up to which the Bareiss route is used for the determinant.
pub const BAREISS_LIMIT: usize = 40;

pub fn gram(space: &FischerSpace) -> GramData {
    let n = space.len();
    let half = half_eta();
    let matrix = (0..n)
        .map(|p| {
            (0..n)
                .map(|q| {
                    if p == q {
                        <EtaScalar as Field>::one()
                    } else if space.collinear(p, q) {
                        half.clone()
                    } else {
                        ez()
                    }
                })
                .collect()
        })
        .collect();
    let det = if n <= BAREISS_LIMIT { gram_det_bareiss(space) } else { gram_det_charpoly(space) };
    GramData { matrix, det }
}

fn normalize(p: IntPoly) -> IntPoly {
    if p.is_zero() {
        return p;
    }
    let p = p.primitive();
    if p.leading().is_some_and(Signed::is_negative) {
        p.neg()
    } else {
        p
    }
}

/// `det(2I + eta A)` by fraction-free elimination over `Z[eta]`,
/// content-normalised.
pub fn gram_det_bareiss(space: &FischerSpace) -> IntPoly {
    let n = space.len();
    if n == 0 {
        return IntPoly::one();
    }
    let two = IntPoly::constant(BigInt::from(2));
    let eta = IntPoly::eta();
    let mut m: Vec<Vec<IntPoly>> = (0..n)
        .map(|p| {
            (0..n)
                .map(|q| {
                    if p == q {
                        two.clone()
                    } else if space.collinear(p, q) {
                        eta.clone()
                    } else {
                        IntPoly::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return IntPoly::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    normalize(if negate { det.neg() } else { det })
}

/// `det(2I + eta A)` from the characteristic polynomial of `A`,
/// content-normalised.
pub fn gram_det_charpoly(space: &FischerSpace) -> IntPoly {
    let chi = adjacency_charpoly(space);
    let n = space.len();
    // coefficient of eta^k is (-1)^k 2^(N-k) chi_(N-k)
    let coeffs: Vec<BigInt> = (0..=n)
        .map(|k| {
            let c = &chi[n - k] << (n - k);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    normalize(IntPoly::from_coeffs(coeffs))
}

// ---- modular characteristic polynomial ----

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut c = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(c) {
            c -= 2;
        }
        let p = c;
        c -= 2;
        Some(p)
    })
}

/// Characteristic polynomial of a dense matrix mod `p` via reduction to
/// Hessenberg form. Returns ascending coefficients of `det(xI - M)`.
fn charpoly_mod(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], p);
        for r in j + 2..n {
            if h[r][j] == 0 {
                continue;
            }
            let u = mul_mod(h[r][j], inv, p);
            // row_r -= u row_(j+1)
            for c in 0..n {
                let t = mul_mod(u, h[j + 1][c], p);
                h[r][c] = (h[r][c] + p - t) % p;
            }
            // col_(j+1) += u col_r
            for row in h.iter_mut() {
                let t = mul_mod(u, row[r], p);
                row[j + 1] = (row[j + 1] + t) % p;
            }
        }
    }
    // p_m = (x - h_mm) p_(m-1) - sum_i h_(i,m) prod(subdiag) p_(i-1)
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut next = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - mul_mod(h[m - 1][m - 1], c, p)) % p;
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = mul_mod(t, h[i][i - 1], p);
            if t == 0 {
                break;
            }
            let f = mul_mod(t, h[i - 1][m - 1], p);
            if f == 0 {
                continue;
            }
            for (k, &c) in polys[i - 1].iter().enumerate() {
                next[k] = (next[k] + p - mul_mod(f, c, p)) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Exact characteristic polynomial `det(xI - A)` of the collinearity
/// adjacency matrix, ascending coefficients.
pub fn adjacency_charpoly(space: &FischerSpace) -> Vec<BigInt> {
    let n = space.len();
    let d = (0..n).map(|p| space.neighbors(p).len()).max().unwrap_or(0);
    // |coefficients| <= (1 + d)^N
    let bound_bits = (n as f64 * ((1 + d) as f64).log2()).ceil() as u64 + 2;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for p in primes() {
        let mat: Vec<Vec<u64>> = (0..n)
            .map(|r| {
                let mut row = vec![0u64; n];
                for &q in space.neighbors(r) {
                    row[q as usize] = 1;
                }
                row
            })
            .collect();
        let chi = charpoly_mod(mat, p);
        let bp = BigInt::from(p);
        let m_mod_p = (&modulus % &bp).to_u64().unwrap();
        let inv = inv_mod(m_mod_p, p);
        for (a, &r) in acc.iter_mut().zip(&chi) {
            let a_mod = a.mod_floor(&bp).to_u64().unwrap();
            let t = mul_mod((r + p - a_mod) % p, inv, p);
            *a += &modulus * BigInt::from(t);
        }
        modulus *= bp;
        if modulus.bits() > bound_bits + 1 {
            break;
        }
    }
    let half = &modulus >> 1;
    acc.into_iter().map(|a| if a > half { a - &modulus } else { a }).collect()
}

fn matvec(space: &FischerSpace, v: &[BigInt]) -> Vec<BigInt> {
    (0..space.len())
        .map(|p| space.neighbors(p).iter().map(|&q| &v[q as usize]).sum())
        .collect()
}

/// Minimal polynomial of `v` under `A`: the first linear dependency among
/// `v, Av, A^2 v, ...`.
fn krylov_minpoly(space: &FischerSpace, v: Vec<BigInt>) -> IntPoly {
    let n = space.len();
    // reduced rows with pivots, each carrying its combination of powers
    let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut w = v;
    for k in 0..=n {
        let mut x: Vec<Rational> = w.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let mut comb = vec![<Rational as Zero>::zero(); k + 1];
        comb[k] = <Rational as One>::one();
        for (piv, row, rc) in &rows {
            let f = x[*piv].clone();
            if Zero::is_zero(&f) {
                continue;
            }
            for (xi, ri) in x.iter_mut().zip(row) {
                if !Zero::is_zero(ri) {
                    *xi -= &f * ri;
                }
            }
            for (ci, ri) in comb.iter_mut().zip(rc) {
                *ci -= &f * ri;
            }
        }
        match x.iter().position(|c| !Zero::is_zero(c)) {
            None => {
                // comb . (v, Av, ..., A^k v) = 0 with comb[k] = 1
                let coeffs: Vec<BigInt> = comb
                    .into_iter()
                    .map(|c| {
                        assert!(c.denom().is_one(), "minimal polynomial has integer coefficients");
                        c.numer().clone()
                    })
                    .collect();
                return IntPoly::from_coeffs(coeffs);
            }
            Some(piv) => {
                let inv = x[piv].recip();
                for xi in x.iter_mut() {
                    *xi *= &inv;
                }
                for ci in comb.iter_mut() {
                    *ci *= &inv;
                }
                rows.push((piv, x, comb));
            }
        }
        w = matvec(space, &w);
    }
    unreachable!("Krylov sequence of length N+1 is dependent")
}

/// True iff `f(A) e_i = 0` for every basis vector.
fn annihilates(space: &FischerSpace, f: &IntPoly) -> Option<usize> {
    let n = space.len();
    let coeffs = f.coeffs();
    (0..n).find(|&i| {
        let mut w = vec![BigInt::zero(); n];
        for c in coeffs.iter().rev() {
            w = matvec(space, &w);
            w[i] += c;
        }
        w.iter().any(|x| !x.is_zero())
    })
}

fn lcm(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let d = f.gcd(g);
    f.mul(&g.div_exact(&d))
}

/// Exact minimal polynomial of the collinearity adjacency matrix (monic).
pub fn adjacency_minimal_polynomial(space: &FischerSpace) -> IntPoly {
    let n = space.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_7473);
    let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect();
    let mut m = krylov_minpoly(space, v);
    while let Some(i) = annihilates(space, &m) {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        m = lcm(&m, &krylov_minpoly(space, e));
    }
    m
}

/// Critical-value report for a space.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalValues {
    pub space: String,
    pub det_degree: usize,
    /// Rational roots of the Gram determinant other than 0 and 1, ascending.
    #[serde(serialize_with = "ser_rationals")]
    pub rational_roots: Vec<Rational>,
    /// Rational roots in `{0, 1}`, outside the parameter domain.
    #[serde(serialize_with = "ser_rationals")]
    pub excluded_roots: Vec<Rational>,
    /// Square-free part of the determinant.
    #[serde(serialize_with = "ser_poly")]
    pub squarefree_certificate: IntPoly,
    #[serde(serialize_with = "ser_poly")]
    pub det: IntPoly,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_poly<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Rational roots and square-free certificate of the Gram determinant.
///
/// Roots are `-2 / lambda` for the nonzero integer eigenvalues `lambda` of
/// the adjacency matrix; these are integer roots of its minimal polynomial.
pub fn critical_values(space: &FischerSpace) -> CriticalValues {
    let det = gram(space).det;
    let m = adjacency_minimal_polynomial(space);
    // drop the eigenvalue 0: it contributes the constant factor 2
    let m0 = if m.coeffs().first().is_some_and(Zero::is_zero) { m.div_exact(&IntPoly::eta()) } else { m };
    let r = m0.degree_or_zero();
    // prod (2 + eta lambda) = sum_k a_k (-1)^(r+k) 2^k eta^(r-k)
    let mut cert = vec![BigInt::zero(); r + 1];
    for (k, a) in m0.coeffs().iter().enumerate() {
        let c = a << k;
        cert[r - k] = if (r + k) % 2 == 1 { -c } else { c };
    }
    let certificate = normalize(IntPoly::from_coeffs(cert));

    let mut roots = Vec::new();
    let mut excluded = Vec::new();
    let bound: BigInt = m0.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default() + 1;
    let bound = bound.to_i64().unwrap_or(i64::MAX).min(space.len() as i64 + 1);
    for lambda in -bound..=bound {
        if lambda == 0 || !m0.eval_int(&BigInt::from(lambda)).is_zero() {
            continue;
        }
        let eta0 = Rational::new(BigInt::from(-2), BigInt::from(lambda));
        if is_forbidden_eta(&eta0) {
            excluded.push(eta0);
        } else {
            roots.push(eta0);
        }
    }
    roots.sort();
    excluded.sort();
    CriticalValues {
        space: space.id().to_string(),
        det_degree: det.degree_or_zero(),
        rational_roots: roots,
        excluded_roots: excluded,
        squarefree_certificate: certificate,
        det,
    }
}

/// Dimension of the radical of the form at `eta = eta0`.
pub fn radical_dim(space: &FischerSpace, eta0: &Rational) -> Result<usize> {
    if is_forbidden_eta(eta0) {
        return Err(Error::DisallowedEta(eta0.to_string()));
    }
    // the kernel of 2b I + a A, eta0 = a/b, is the lambda = -2b/a eigenspace
    let (a, b) = (eta0.numer(), eta0.denom());
    let twob: BigInt = b << 1;
    if !twob.is_multiple_of(a) {
        return Ok(0);
    }
    let lambda = -(twob / a);
    Ok(eigenvalue_multiplicity(space, &lambda))
}

/// Algebraic multiplicity of `lambda` in the characteristic polynomial of
/// `A`; equal to the geometric one because `A` is symmetric.
fn eigenvalue_multiplicity(space: &FischerSpace, lambda: &BigInt) -> usize {
    if space.len() <= BAREISS_LIMIT {
        return space.len() - int_rank(space, lambda);
    }
    let chi = IntPoly::from_coeffs(adjacency_charpoly(space));
    let factor = IntPoly::from_coeffs(vec![-lambda.clone(), BigInt::one()]);
    let mut p = chi;
    let mut k = 0;
    while !p.is_zero() && p.eval_int(lambda).is_zero() {
        p = p.div_exact(&factor);
        k += 1;
    }
    k
}

/// Rank of `A - lambda I` over Q by fraction-free elimination.
fn int_rank(space: &FischerSpace, lambda: &BigInt) -> usize {
    let n = space.len();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|p| {
            let mut row = vec![BigInt::zero(); n];
            for &q in space.neighbors(p) {
                row[q as usize] = BigInt::one();
            }
            row[p] = -lambda.clone();
            row
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(r) = (rank..n).find(|&r| m[r][col].sign() != Sign::NoSign) else { continue };
        m.swap(rank, r);
        for i in rank + 1..n {
            for j in col + 1..n {
                let v = &m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}
