use std::fmt;

use crate::error::Result;
use crate::scalar::{EtaScalar, Field, Rational};
use crate::space::FischerSpace;

/// A sparse vector of the Matsuo algebra, keyed by point index.
///
/// Entries are sorted by index and never store an explicit zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraVector<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> AlgebraVector<F> {
    pub fn zero() -> Self {
        AlgebraVector { entries: Vec::new() }
    }

    /// The basis vector of point `p`.
    pub fn point(p: usize) -> Self {
        AlgebraVector { entries: vec![(p, F::one())] }
    }

    /// Sum of the given points, each with coefficient one.
    pub fn sum_of(points: &[usize]) -> Self {
        Self::from_entries(points.iter().map(|&p| (p, F::one())))
    }

    /// Collects `(index, coefficient)` pairs, summing repeats and dropping
    /// zeros.
    pub fn from_entries(it: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut raw: Vec<(usize, F)> = it.into_iter().collect();
        raw.sort_by_key(|e| e.0);
        let mut entries: Vec<(usize, F)> = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            match entries.last_mut() {
                Some((last, acc)) if *last == k => *acc = acc.plus(&c),
                _ => entries.push((k, c)),
            }
        }
        entries.retain(|(_, c)| !c.is_zero());
        AlgebraVector { entries }
    }


    pub fn from_dense(values: Vec<F>) -> Self {
        AlgebraVector {
            entries: values.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (k, c) in &self.entries {
            out[*k] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn get(&self, k: usize) -> Option<&F> {
        self.entries.binary_search_by_key(&k, |e| e.0).ok().map(|i| &self.entries[i].1)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Largest index in the support.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.axpy(&F::one().negated(), other)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: &F, other: &Self) -> Self {
        if a.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i].clone());
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, a.times(&y[j].1)));
                j += 1;
            } else {
                let c = x[i].1.plus(&a.times(&y[j].1));
                if !c.is_zero() {
                    out.push((x[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        AlgebraVector { entries: out }
    }

    pub fn scaled(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        AlgebraVector { entries: self.entries.iter().map(|(k, c)| (*k, a.times(c))).collect() }
    }

    pub fn negated(&self) -> Self {
        AlgebraVector { entries: self.entries.iter().map(|(k, c)| (*k, c.negated())).collect() }
    }

    /// Coefficient-wise map into another field; zeros produced by the map
    /// are dropped.
    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<AlgebraVector<G>> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (k, c) in &self.entries {
            let v = f(c)?;
            if !v.is_zero() {
                entries.push((*k, v));
            }
        }
        Ok(AlgebraVector { entries })
    }

    /// Renders with point labels, e.g. `b_{1,2} + (eta)/(2)*c_{1,3}`.
    pub fn display_with(&self, space: &FischerSpace) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, c)) in self.entries.iter().enumerate() {
            let label = space.label(*k);
            let term = if c.is_one() {
                label.to_string()
            } else if c.negated().is_one() {
                format!("-{label}")
            } else {
                let s = c.to_string();
                if s.contains(['+', ' ']) || s[1..].contains('-') {
                    format!("({s})*{label}")
                } else {
                    format!("{s}*{label}")
                }
            };
            if n == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

impl AlgebraVector<EtaScalar> {
    /// Specialises every coefficient at `eta0`.
    pub fn evaluate(&self, eta0: &Rational) -> Result<AlgebraVector<Rational>> {
        self.try_map(|c| c.evaluate(eta0))
    }
}

impl<F: Field> fmt::Debug for AlgebraVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, (k, c)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {c}")?;
        }
        f.write_str("]")
    }
}
