//! Elements of `T wr S_n` as permutations of `T x {1..n}`, and the closed
//! formulas for third points.
//!
//! Group elements act on the right and compose left to right, so `x * y`
//! means "first x, then y". A base element `b` sends `(s, k)` to
//! `(s * b(k), k)`; a permutation `sigma` sends `(s, k)` to `(s, k^sigma)`.

use crate::group::FiniteGroup;

use super::Point;

/// A wreath-group element stored as its action on `T x {0..n-1}`, with
/// `(s, k)` at index `k * |T| + s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    perm: Vec<u32>,
}

impl WreathElement {
    pub fn identity(order: usize, n: usize) -> Self {
        WreathElement { perm: (0..(order * n) as u32).collect() }
    }

    /// From the images of `T x {0..n-1}`; panics if not a permutation.
    pub fn from_perm(perm: Vec<u32>) -> Self {
        let mut seen = vec![false; perm.len()];
        for &x in &perm {
            assert!(!std::mem::replace(&mut seen[x as usize], true), "not a permutation");
        }
        WreathElement { perm }
    }

    /// The 3-transposition `t.(i,j) = t_i t_j^-1 (i,j)` (positions 1-based).
    pub fn transposition(group: &FiniteGroup, n: usize, p: Point) -> Self {
        let m = group.order();
        let mut perm: Vec<u32> = (0..(m * n) as u32).collect();
        let (i, j) = (p.i - 1, p.j - 1);
        let tinv = group.inv(p.t);
        for s in 0..m {
            perm[i * m + s] = (j * m + group.mul(s, p.t)) as u32;
            perm[j * m + s] = (i * m + group.mul(s, tinv)) as u32;
        }
        WreathElement { perm }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &WreathElement) -> WreathElement {
        WreathElement { perm: self.perm.iter().map(|&x| other.perm[x as usize]).collect() }
    }

    pub fn inverse(&self) -> WreathElement {
        let mut perm = vec![0u32; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            perm[y as usize] = x as u32;
        }
        WreathElement { perm }
    }

    /// `y^-1 x y`.
    pub fn conjugate_by(&self, y: &WreathElement) -> WreathElement {
        y.inverse().then(self).then(y)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.then(self);
            n += 1;
        }
        n
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.perm
    }
}

/// Third point of the line through `x` and `y`, from the closed formulas:
/// `{t.(i,j), s.(j,k), ts.(i,k)}` for pairs sharing one position and
/// `{t.(i,j), s.(i,j), st^-1 s.(i,j)}` when `|st^-1| = 3`. `None` when the
/// points are equal or not collinear.
pub fn lemma_third(group: &FiniteGroup, x: Point, y: Point) -> Option<Point> {
    if x == y {
        return None;
    }
    if (x.i, x.j) == (y.i, y.j) {
        let d = group.mul(y.t, group.inv(x.t));
        if group.element_order(d) != 3 {
            return None;
        }
        let t = group.mul(d, y.t);
        return Some(Point { t, i: x.i, j: x.j });
    }
    let shared = [x.i, x.j].into_iter().find(|&m| m == y.i || m == y.j)?;
    // orient x as t.(i, m) and y as s.(m, k)
    let (t, i) = if x.j == shared { (x.t, x.i) } else { (group.inv(x.t), x.j) };
    let (s, k) = if y.i == shared { (y.t, y.j) } else { (group.inv(y.t), y.i) };
    Some(Point::normalized(group, group.mul(t, s), i, k))
}
