//! Finite base groups for the wreath construction.
//!
//! Groups are stored as validated Cayley tables over element indices with
//! the identity at index 0.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

/// The built-in catalog of legal wreath bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupName {
    C1,
    C2,
    C3,
    V4,
    S3,
    C3xC3,
    A4,
    E27,
}

impl GroupName {
    pub const ALL: [GroupName; 8] = [
        GroupName::C1,
        GroupName::C2,
        GroupName::C3,
        GroupName::V4,
        GroupName::S3,
        GroupName::C3xC3,
        GroupName::A4,
        GroupName::E27,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "C1" | "1" => GroupName::C1,
            "C2" | "2" => GroupName::C2,
            "C3" | "3" => GroupName::C3,
            "V4" | "2^2" => GroupName::V4,
            "S3" => GroupName::S3,
            "C3xC3" | "3^2" => GroupName::C3xC3,
            "A4" => GroupName::A4,
            "E27" | "3^1+2" => GroupName::E27,
            other => return Err(Error::UnknownGroup(other.to_string())),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GroupName::C1 => "C1",
            GroupName::C2 => "C2",
            GroupName::C3 => "C3",
            GroupName::V4 => "V4",
            GroupName::S3 => "S3",
            GroupName::C3xC3 => "C3xC3",
            GroupName::A4 => "A4",
            GroupName::E27 => "E27",
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, checking closure, identity at
    /// index 0, inverses, and associativity (full `n^3` loop).
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::GroupAxiom("empty group".into()));
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n) {
            return Err(Error::GroupAxiom(format!("table is not {n}x{n}")));
        }
        if mult.iter().flatten().any(|&x| x >= n) {
            return Err(Error::GroupAxiom("product outside the element set".into()));
        }
        for x in 0..n {
            if mult[0][x] != x || mult[x][0] != x {
                return Err(Error::GroupAxiom(format!(
                    "first element {:?} is not an identity",
                    labels[0]
                )));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            let Some(y) = (0..n).find(|&y| mult[x][y] == 0) else {
                return Err(Error::GroupAxiom(format!("{:?} has no inverse", labels[x])));
            };
            if mult[y][x] != 0 {
                return Err(Error::GroupAxiom(format!("{:?} has no two-sided inverse", labels[x])));
            }
            inv[x] = y;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = mult[x][y];
                for z in 0..n {
                    if mult[xy][z] != mult[x][mult[y][z]] {
                        return Err(Error::GroupAxiom(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[x], labels[y], labels[z]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), labels, mult, inv })
    }

    /// Builds a group from elements of some concrete type with a product.
    fn from_elements<T: Clone + Eq + std::hash::Hash>(
        name: &str,
        elements: Vec<T>,
        label: impl Fn(&T) -> String,
        product: impl Fn(&T, &T) -> T,
    ) -> FiniteGroup {
        let index: HashMap<T, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mult = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&product(a, b)]).collect())
            .collect();
        let labels = elements.iter().map(label).collect();
        FiniteGroup::from_table(name, labels, mult).expect("built-in group table is valid")
    }

    /// One of the catalog groups.
    pub fn builtin(name: GroupName) -> FiniteGroup {
        match name {
            GroupName::C1 => cyclic("C1", 1, &["1"]),
            GroupName::C2 => cyclic("C2", 2, &["1", "x"]),
            GroupName::C3 => cyclic("C3", 3, &["1", "x", "x2"]),
            GroupName::V4 => {
                // bits (e, f)
                let labels = ["1", "e", "f", "ef"];
                FiniteGroup::from_elements("V4", vec![0u8, 1, 2, 3], |&x| labels[x as usize].to_string(), |a, b| a ^ b)
            }
            GroupName::S3 => {
                // e^a f^b with e^2 = f^3 = (ef)^2 = 1, so f e = e f^2
                let elems: Vec<(u8, u8)> = vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)];
                FiniteGroup::from_elements(
                    "S3",
                    elems,
                    |&(a, b)| {
                        let e = if a == 1 { "e" } else { "" };
                        let f = match b {
                            0 => "",
                            1 => "f",
                            _ => "f2",
                        };
                        let s = format!("{e}{f}");
                        if s.is_empty() { "1".into() } else { s }
                    },
                    |&(a1, b1), &(a2, b2)| {
                        // f^b1 e^a2 = e^a2 f^(b1 * (-1)^a2)
                        let b1_moved = if a2 == 1 { (3 - b1) % 3 } else { b1 };
                        ((a1 + a2) % 2, (b1_moved + b2) % 3)
                    },
                )
            }
            GroupName::C3xC3 => {
                let elems: Vec<(u8, u8)> = (0..3).flat_map(|r| (0..3).map(move |s| (r, s))).collect();
                FiniteGroup::from_elements(
                    "C3xC3",
                    elems,
                    |&(r, s)| if (r, s) == (0, 0) { "1".into() } else { format!("u{r}v{s}") },
                    |&(r1, s1), &(r2, s2)| ((r1 + r2) % 3, (s1 + s2) % 3),
                )
            }
            GroupName::A4 => {
                let mut elems: Vec<[u8; 4]> = permutations4().into_iter().filter(is_even).collect();
                elems.sort_by_key(|p| (perm_order(p), *p));
                FiniteGroup::from_elements(
                    "A4",
                    elems,
                    cycle_notation,
                    // left-to-right composition: first a, then b
                    |a, b| [b[a[0] as usize], b[a[1] as usize], b[a[2] as usize], b[a[3] as usize]],
                )
            }
            GroupName::E27 => {
                // u^r v^s w^t with w = [u, v] central and v u = u v w^-1
                let elems: Vec<(u8, u8, u8)> =
                    (0..27).map(|k| ((k / 9) as u8, ((k / 3) % 3) as u8, (k % 3) as u8)).collect();
                FiniteGroup::from_elements(
                    "E27",
                    elems,
                    |&(r, s, t)| if (r, s, t) == (0, 0, 0) { "1".into() } else { format!("u{r}v{s}w{t}") },
                    |&(a, b, c), &(d, e, f)| e27_mul((a, b, c), (d, e, f)),
                )
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut n = 1;
        while acc != 0 {
            acc = self.mult[acc][x];
            n += 1;
        }
        n
    }

    /// True iff every element has order 1, 2 or 3.
    pub fn validate_orders(&self) -> bool {
        (0..self.order()).all(|x| self.element_order(x) <= 3)
    }

    /// First element of order greater than 3, if any.
    pub fn order_violation(&self) -> Option<(usize, usize)> {
        (0..self.order()).map(|x| (x, self.element_order(x))).find(|&(_, o)| o > 3)
    }

    /// Parses the text Cayley-table format:
    ///
    /// ```text
    /// order N
    /// l0 l1 ... l(N-1)
    /// <N rows of N labels>
    /// ```
    ///
    /// with the identity first.
    pub fn parse_cayley_table(name: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty Cayley table".into()))?;
        let n: usize = header
            .strip_prefix("order")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}, expected \"order N\"")))?;
        let labels: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse("missing label line".into()))?
            .split_whitespace()
            .map(String::from)
            .collect();
        if labels.len() != n {
            return Err(Error::Parse(format!("expected {n} labels, found {}", labels.len())));
        }
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != n {
            return Err(Error::Parse("duplicate element labels".into()));
        }
        let mut mult = Vec::with_capacity(n);
        for r in 0..n {
            let row = lines.next().ok_or_else(|| Error::Parse(format!("missing table row {}", r + 1)))?;
            let entries: Vec<usize> = row
                .split_whitespace()
                .map(|l| index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown label {l:?}"))))
                .collect::<Result<_>>()?;
            if entries.len() != n {
                return Err(Error::Parse(format!("row {} has {} entries", r + 1, entries.len())));
            }
            mult.push(entries);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after the table".into()));
        }
        FiniteGroup::from_table(name, labels, mult)
    }

    pub fn load_cayley_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("T");
        Self::parse_cayley_table(name, &text)
    }

    /// Renders the group in the Cayley-table text format.
    pub fn to_cayley_table(&self) -> String {
        let mut out = format!("order {}\n{}\n", self.order(), self.labels.join(" "));
        for row in &self.mult {
            let names: Vec<&str> = row.iter().map(|&x| self.labels[x].as_str()).collect();
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inner automorphism `x -> g^-1 x g`.
    pub fn conjugation(&self, g: usize) -> Vec<usize> {
        (0..self.order()).map(|x| self.mul(self.mul(self.inv(g), x), g)).collect()
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

fn cyclic(name: &str, n: usize, labels: &[&str]) -> FiniteGroup {
    let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(name, labels.iter().map(|s| s.to_string()).collect(), mult).unwrap()
}

pub(crate) fn e27_mul((a, b, c): (u8, u8, u8), (d, e, f): (u8, u8, u8)) -> (u8, u8, u8) {
    // u^a v^b w^c u^d v^e w^f = u^(a+d) v^(b+e) w^(c+f-bd)
    let t = (c as i32 + f as i32 - (b as i32 * d as i32)).rem_euclid(3) as u8;
    ((a + d) % 3, (b + e) % 3, t)
}

fn permutations4() -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn is_even(p: &[u8; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn perm_order(p: &[u8; 4]) -> usize {
    let mut q = *p;
    let mut n = 1;
    while q != [0, 1, 2, 3] {
        q = [p[q[0] as usize], p[q[1] as usize], p[q[2] as usize], p[q[3] as usize]];
        n += 1;
    }
    n
}

/// Cycle notation on points 1..4, e.g. `(1,2)(3,4)`; identity is `()`.
fn cycle_notation(p: &[u8; 4]) -> String {
    let mut seen = [false; 4];
    let mut out = String::new();
    for start in 0..4 {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cyc = vec![start + 1];
        seen[start] = true;
        let mut x = p[start] as usize;
        while x != start {
            cyc.push(x + 1);
            seen[x] = true;
            x = p[x] as usize;
        }
        let parts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("({})", parts.join(",")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// An automorphism of a [`FiniteGroup`], as a permutation of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAutomorphism {
    image: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn new(group: &FiniteGroup, image: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if image.len() != n {
            return Err(Error::BadAutomorphism("wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::BadAutomorphism("not a bijection".into()));
            }
        }
        if image[0] != 0 {
            return Err(Error::BadAutomorphism("identity not fixed".into()));
        }
        for x in 0..n {
            for y in 0..n {
                if image[group.mul(x, y)] != group.mul(image[x], image[y]) {
                    return Err(Error::BadAutomorphism(format!(
                        "product of {} and {} not preserved",
                        group.label(x),
                        group.label(y)
                    )));
                }
            }
        }
        Ok(GroupAutomorphism { image })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupAutomorphism { image: (0..group.order()).collect() }
    }

    /// The automorphism determined by images of generators, extended by
    /// breadth-first closure; fails if the assignment is inconsistent.
    pub fn from_generator_images(group: &FiniteGroup, gens: &[(usize, usize)]) -> Result<Self> {
        let n = group.order();
        let mut image = vec![usize::MAX; n];
        image[0] = 0;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &(g, gi) in gens {
                let y = group.mul(x, g);
                let yi = group.mul(image[x], gi);
                if image[y] == usize::MAX {
                    image[y] = yi;
                    frontier.push(y);
                } else if image[y] != yi {
                    return Err(Error::BadAutomorphism("generator images inconsistent".into()));
                }
            }
        }
        if image.contains(&usize::MAX) {
            return Err(Error::BadAutomorphism("generators do not generate the group".into()));
        }
        Self::new(group, image)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `self` followed by `other`.
    pub fn then(&self, group: &FiniteGroup, other: &GroupAutomorphism) -> Result<Self> {
        Self::new(group, self.image.iter().map(|&x| other.image[x]).collect())
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| self.image[y] == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let expect = [1, 2, 3, 4, 6, 9, 12, 27];
        for (name, n) in GroupName::ALL.iter().zip(expect) {
            let g = FiniteGroup::builtin(*name);
            assert_eq!(g.order(), n, "{name}");
            assert!(g.validate_orders(), "{name}");
        }
    }

    #[test]
    fn a4_has_eight_elements_of_order_three() {
        let g = FiniteGroup::builtin(GroupName::A4);
        assert_eq!((0..12).filter(|&x| g.element_order(x) == 3).count(), 8);
        let x = g.index_of("(1,2)(3,4)").unwrap();
        assert_eq!(g.element_order(x), 2);
        assert_eq!(g.element_order(g.identity()), 1);
    }

    #[test]
    fn v4_is_elementary() {
        let g = FiniteGroup::builtin(GroupName::V4);
        assert!((1..4).all(|x| g.element_order(x) == 2));
    }

    #[test]
    fn e27_commutator_relation() {
        let g = FiniteGroup::builtin(GroupName::E27);
        let u = g.index_of("u1v0w0").unwrap();
        let v = g.index_of("u0v1w0").unwrap();
        let w = g.index_of("u0v0w1").unwrap();
        // w = u^-1 v^-1 u v
        let comm = g.mul(g.mul(g.mul(g.inv(u), g.inv(v)), u), v);
        assert_eq!(comm, w);
        assert_eq!(g.element_order(u), 3);
        assert_eq!(g.element_order(w), 3);
        // w is central
        assert!((0..27).all(|x| g.mul(x, w) == g.mul(w, x)));
    }

    #[test]
    fn s3_relations() {
        let g = FiniteGroup::builtin(GroupName::S3);
        let e = g.index_of("e").unwrap();
        let f = g.index_of("f").unwrap();
        assert_eq!(g.element_order(e), 2);
        assert_eq!(g.element_order(f), 3);
        assert_eq!(g.element_order(g.mul(e, f)), 2);
        // f e = e f^2
        assert_eq!(g.label(g.mul(f, e)), "ef2");
    }

    #[test]
    fn cyclic_four_is_rejected_by_order_check() {
        let text = "order 4\n0 1 2 3\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n";
        let g = FiniteGroup::parse_cayley_table("C4", text).unwrap();
        assert!(!g.validate_orders());
        assert_eq!(g.order_violation().map(|(_, o)| o), Some(4));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        // not associative: a Latin square that is not a group table
        let text = "order 5\n0 1 2 3 4\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        assert!(matches!(FiniteGroup::parse_cayley_table("L5", text), Err(Error::GroupAxiom(_))));
        let text = "order 2\na b\nb a\na b\n";
        assert!(FiniteGroup::parse_cayley_table("bad", text).is_err());
    }

    #[test]
    fn cayley_round_trip() {
        let g = FiniteGroup::builtin(GroupName::S3);
        let h = FiniteGroup::parse_cayley_table("S3", &g.to_cayley_table()).unwrap();
        assert_eq!(g.table(), h.table());
    }

    #[test]
    fn swap_automorphism_of_e27() {
        let g = FiniteGroup::builtin(GroupName::E27);
        let u = g.index_of("u1v0w0").unwrap();
        let v = g.index_of("u0v1w0").unwrap();
        let sigma = GroupAutomorphism::from_generator_images(&g, &[(u, v), (v, u)]).unwrap();
        assert!(sigma.is_involution());
        let w = g.index_of("u0v0w1").unwrap();
        assert_eq!(sigma.apply(w), g.inv(w));
        let inner = GroupAutomorphism::new(&g, g.conjugation(u)).unwrap();
        let composed = sigma.then(&g, &inner).unwrap();
        assert_eq!(composed.apply(0), 0);
    }
}
