//! Fischer spaces of `Wr(T, n)`: points `t.(i,j)`, the third-point map,
//! lines, diagrams and automorphism checks.

mod diagram;
mod family;
mod wreath;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

pub use diagram::{all_canonical_codes, Diagram, DiagramCode, EDGE_ORDER, ROLES, SYMMETRIES};
pub use family::Family;
pub use wreath::{lemma_third, WreathElement};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupName};

const NONE: u32 = u32::MAX;

/// Spaces up to this size keep their line list in memory.
pub const EAGER_LINE_LIMIT: usize = 500;

/// The 3-transposition `t.(i,j) = t_i t_j^-1 (i,j)`, stored with `i < j`
/// (1-based positions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub t: usize,
    pub i: usize,
    pub j: usize,
}

impl Point {
    /// `t.(i,j)`, rewritten as `t^-1.(j,i)` when `i > j`.
    pub fn normalized(group: &FiniteGroup, t: usize, i: usize, j: usize) -> Point {
        if i < j {
            Point { t, i, j }
        } else {
            Point { t: group.inv(t), i: j, j: i }
        }
    }
}

#[derive(Clone)]
pub struct FischerSpace {
    id: String,
    family: Option<Family>,
    base: FiniteGroup,
    n: usize,
    points: Vec<Point>,
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
    third: Vec<u32>,
    neighbors: Vec<Vec<u32>>,
    lines: Option<Vec<[usize; 3]>>,
}

impl FischerSpace {
    /// The Fischer space of `Wr(T, n)`, with third points computed by
    /// conjugation in `T wr S_n`.
    pub fn build_wreath(base: FiniteGroup, n: usize) -> Result<Self> {
        let id = format!("{}:{n}", base.name());
        Self::build(id, None, base, n)
    }

    pub fn build_named(family: Family, n: usize) -> Result<Self> {
        Self::build(format!("{family}:{n}"), Some(family), FiniteGroup::builtin(family.base()), n)
    }

    /// Parses `FAMILY:n` or `GROUP:n`, e.g. `W3A:4` or `C3xC3:3`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let (name, n) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("ambient {spec:?} is not of the form NAME:n")))?;
        let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad position count in {spec:?}")))?;
        let name = name.trim();
        if let Ok(f) = name.parse::<Family>() {
            return Self::build_named(f, n);
        }
        match GroupName::parse(name) {
            Ok(g) => Self::build_wreath(FiniteGroup::builtin(g), n),
            Err(_) => Err(Error::UnknownFamily(name.to_string())),
        }
    }

    /// Builds over a base group read from a Cayley-table file.
    pub fn from_table_file(path: &Path, n: usize) -> Result<Self> {
        Self::build_wreath(FiniteGroup::load_cayley_table(path)?, n)
    }

    fn build(id: String, family: Option<Family>, base: FiniteGroup, n: usize) -> Result<Self> {
        if let Some((x, order)) = base.order_violation() {
            return Err(Error::ThreeTranspositionViolation { element: base.label(x).to_string(), order });
        }
        if n < 2 {
            return Err(Error::InvalidParameters(format!("need at least 2 positions, got {n}")));
        }
        let m = base.order();
        let mut points = Vec::with_capacity(m * n * (n - 1) / 2);
        for i in 1..=n {
            for j in i + 1..=n {
                points.extend((0..m).map(|t| Point { t, i, j }));
            }
        }
        let len = points.len();
        let elements: Vec<WreathElement> = points.iter().map(|&p| WreathElement::transposition(&base, n, p)).collect();
        let index: HashMap<&WreathElement, usize> = elements.iter().enumerate().map(|(k, e)| (e, k)).collect();

        let mut third = vec![NONE; len * len];
        for p in 0..len {
            for q in p + 1..len {
                // disjoint supports commute
                let (x, y) = (points[p], points[q]);
                if x.i != y.i && x.i != y.j && x.j != y.i && x.j != y.j {
                    continue;
                }
                let z = elements[p].conjugate_by(&elements[q]);
                if z == elements[p] {
                    continue;
                }
                let r = *index.get(&z).ok_or_else(|| {
                    Error::InvalidParameters("conjugate of a 3-transposition left the class".into())
                })?;
                third[p * len + q] = r as u32;
                third[q * len + p] = r as u32;
            }
        }
        let neighbors: Vec<Vec<u32>> = (0..len)
            .map(|p| (0..len as u32).filter(|&q| third[p * len + q as usize] != NONE).collect())
            .collect();

        let mut labels = Vec::with_capacity(len);
        let mut lookup = HashMap::new();
        for (k, p) in points.iter().enumerate() {
            let generic = format!("{}.({},{})", base.label(p.t), p.i, p.j);
            let letter = family.and_then(|f| f.letter_label(&base, p.t, p.i, p.j));
            if let Some(f) = family {
                for alias in f.alias_labels(&base, p.t, p.i, p.j) {
                    lookup.insert(alias, k);
                }
                // x_{j,i} = x_{i,j} when t is an involution
                if letter.is_some() && base.inv(p.t) == p.t {
                    if let Some(l) = f.letter_label(&base, p.t, p.j, p.i) {
                        lookup.insert(l, k);
                    }
                }
            }
            lookup.insert(generic.clone(), k);
            let primary = letter.unwrap_or(generic);
            lookup.insert(primary.clone(), k);
            labels.push(primary);
        }

        let mut space = FischerSpace { id, family, base, n, points, labels, lookup, third, neighbors, lines: None };
        if len <= EAGER_LINE_LIMIT {
            space.lines = Some(space.stream_lines().collect());
        }
        Ok(space)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, p: usize) -> Point {
        self.points[p]
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, p: Point) -> Option<usize> {
        let m = self.base.order();
        if p.i == 0 || p.i >= p.j || p.j > self.n || p.t >= m {
            return None;
        }
        // block of (i,j) pairs before (p.i, p.j), then t
        let before_i: usize = (1..p.i).map(|r| self.n - r).sum();
        Some((before_i + (p.j - p.i - 1)) * m + p.t)
    }

    /// Looks up a point by label (`b_{1,2}`, `(1,2,3).(1,2)`, `#7`, and
    /// `t.(j,i)` with reversed positions).
    pub fn find(&self, label: &str) -> Result<usize> {
        let key: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(&k) = self.lookup.get(&key) {
            return Ok(k);
        }
        if let Some(k) = key.strip_prefix('#').and_then(|s| s.parse::<usize>().ok()) {
            if k < self.len() {
                return Ok(k);
            }
        }
        if let Some((t, pos)) = key.rsplit_once(".(") {
            let pair = pos.strip_suffix(')').and_then(|s| s.split_once(','));
            if let (Some(t), Some((i, j))) = (self.base.index_of(t), pair) {
                if let (Ok(i), Ok(j)) = (i.parse::<usize>(), j.parse::<usize>()) {
                    if i != j && i >= 1 && j >= 1 {
                        if let Some(k) = self.index_of(Point::normalized(&self.base, t, i, j)) {
                            return Ok(k);
                        }
                    }
                }
            }
        }
        Err(Error::UnknownPoint(label.to_string()))
    }

    /// Third point on the line through `p` and `q`, if they are collinear.
    pub fn third(&self, p: usize, q: usize) -> Option<usize> {
        let r = self.third[p * self.len() + q];
        (r != NONE).then_some(r as usize)
    }

    pub fn collinear(&self, p: usize, q: usize) -> bool {
        self.third[p * self.len() + q] != NONE
    }

    /// Points collinear with `p`, ascending.
    pub fn neighbors(&self, p: usize) -> &[u32] {
        &self.neighbors[p]
    }

    /// Third point from the closed formulas instead of conjugation.
    pub fn lemma_third(&self, p: usize, q: usize) -> Option<usize> {
        lemma_third(&self.base, self.points[p], self.points[q]).map(|z| self.index_of(z).expect("point in space"))
    }

    /// The wreath-group element of point `p`.
    pub fn element(&self, p: usize) -> WreathElement {
        WreathElement::transposition(&self.base, self.n, self.points[p])
    }

    fn stream_lines(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        (0..self.len()).flat_map(move |p| {
            self.neighbors[p].iter().filter_map(move |&q| {
                let q = q as usize;
                let r = self.third(p, q)?;
                (p < q && q < r).then_some([p, q, r])
            })
        })
    }

    /// Lines as ascending index triples, in lexicographic order.
    pub fn lines(&self) -> Box<dyn Iterator<Item = [usize; 3]> + '_> {
        match &self.lines {
            Some(l) => Box::new(l.iter().copied()),
            None => Box::new(self.stream_lines()),
        }
    }

    pub fn line_count(&self) -> usize {
        match &self.lines {
            Some(l) => l.len(),
            None => self.neighbors.iter().map(Vec::len).sum::<usize>() / 6,
        }
    }

    /// Number of lines through `p`.
    pub fn point_degree(&self, p: usize) -> usize {
        self.neighbors[p].len() / 2
    }

    /// Connected components of the collinearity graph, by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            comp[s] = c;
            let mut stack = vec![s];
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(x);
                for &y in &self.neighbors[x] {
                    if comp[y as usize] == usize::MAX {
                        comp[y as usize] = c;
                        stack.push(y as usize);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.len() <= 1 || self.components().len() == 1
    }

    /// The collinearity diagram on `a, b, c, d, e`.
    pub fn diagram_of(&self, a: usize, bc: (usize, usize), de: (usize, usize)) -> Result<Diagram> {
        let v = [a, bc.0, bc.1, de.0, de.1];
        for x in 0..5 {
            if v[x] >= self.len() {
                return Err(Error::UnknownPoint(format!("#{}", v[x])));
            }
            for y in 0..x {
                if v[x] == v[y] {
                    return Err(Error::InvalidConfiguration("support points must be distinct".into()));
                }
            }
        }
        let mut adj = [[false; 5]; 5];
        for x in 0..5 {
            for y in 0..5 {
                adj[x][y] = x != y && self.collinear(v[x], v[y]);
            }
        }
        Diagram::from_adjacency(adj)
    }

    /// True iff `perm` is a bijection of points carrying lines to lines.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        if perm.iter().any(|&x| x >= self.len() || std::mem::replace(&mut seen[x], true)) {
            return false;
        }
        self.lines().all(|[p, q, r]| self.third(perm[p], perm[q]) == Some(perm[r]))
    }

    pub fn stats(&self) -> SpaceStats {
        let degrees: Vec<usize> = (0..self.len()).map(|p| self.point_degree(p)).collect();
        let lines = self.line_count();
        let mut notes = Vec::new();
        if self.family == Some(Family::W2A) {
            let n2 = self.n * self.n;
            let formula = 4 * binomial(self.n, 3);
            if lines != formula {
                notes.push(format!("line count {lines} differs from 4*C(n,3) = {formula}"));
            }
            if lines != n2 {
                notes.push(format!("line count {lines} differs from the closed form n^2 = {n2}"));
            }
        }
        SpaceStats {
            space: self.id.clone(),
            family: self.family.map(|f| f.to_string()),
            base_group: self.base.name().to_string(),
            base_order: self.base.order(),
            n: self.n,
            points: self.len(),
            lines,
            degree_min: degrees.iter().copied().min().unwrap_or(0),
            degree_max: degrees.iter().copied().max().unwrap_or(0),
            components: self.components().len(),
            notes,
        }
    }

    pub fn export(&self) -> SpaceExport {
        SpaceExport {
            family: self.family.map(|f| f.to_string()).unwrap_or_else(|| "wreath".into()),
            n: self.n,
            base_group: self.base.name().to_string(),
            points: self
                .points
                .iter()
                .zip(&self.labels)
                .map(|(p, l)| ExportPoint { label: l.clone(), t: self.base.label(p.t).to_string(), i: p.i, j: p.j })
                .collect(),
            lines: self.lines().collect(),
        }
    }
}

impl fmt::Debug for FischerSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FischerSpace({}, {} points)", self.id, self.len())
    }
}

impl PartialEq for FischerSpace {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.n == other.n && self.base == other.base
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, r| acc * (n - r) / (r + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceStats {
    pub space: String,
    pub family: Option<String>,
    pub base_group: String,
    pub base_order: usize,
    pub n: usize,
    pub points: usize,
    pub lines: usize,
    pub degree_min: usize,
    pub degree_max: usize,
    pub components: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportPoint {
    pub label: String,
    pub t: String,
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceExport {
    pub family: String,
    pub n: usize,
    pub base_group: String,
    pub points: Vec<ExportPoint>,
    pub lines: Vec<[usize; 3]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(spec: &str) -> FischerSpace {
        FischerSpace::from_spec(spec).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(sp("C3:3").len(), 9);
        assert_eq!(sp("A4:2").len(), 12);
        let w = sp("C2:3");
        assert_eq!((w.len(), w.line_count()), (6, 4));
        assert_eq!(sp("A:4").len(), 6);
        assert_eq!(sp("A:4").line_count(), 4);
        assert_eq!(sp("W2D:3").len(), 12);
        assert_eq!(sp("W3D:2").len(), 6);
        assert_eq!(sp("W3D:3").len(), 18);
    }

    #[test]
    fn degrees() {
        let s = sp("W2D:4");
        assert!((0..s.len()).all(|p| s.point_degree(p) == 8));
        let s = sp("WrA4:2");
        assert!((0..s.len()).all(|p| s.point_degree(p) == 4));
        let s = sp("W3D:3");
        assert!((0..s.len()).all(|p| s.point_degree(p) == 7));
    }

    #[test]
    fn index_of_matches_ordering() {
        let s = sp("E27:4");
        for (k, &p) in s.points().iter().enumerate() {
            assert_eq!(s.index_of(p), Some(k));
        }
        let mut sorted = s.points().to_vec();
        sorted.sort_by_key(|p| (p.i, p.j, p.t));
        assert_eq!(sorted, s.points());
    }

    #[test]
    fn named_lookups() {
        let s = sp("W3A:3");
        let b = s.find("b_{1,2}").unwrap();
        let c = s.find("c_{1,2}").unwrap();
        assert_eq!(s.third(b, c), Some(s.find("c_{2,1}").unwrap()));
        assert_eq!(s.find("b_{2,1}").unwrap(), b);
        assert_eq!(s.find("x.(1,2)").unwrap(), c);
        assert_eq!(s.find("x.(2,1)").unwrap(), s.find("c_{2,1}").unwrap());
        assert!(s.find("c_{1,4}").is_err());
        let a = sp("A:4");
        assert_eq!(a.third(a.find("b_{1,2}").unwrap(), a.find("b_{3,4}").unwrap()), None);
    }

    #[test]
    fn s3_aliases() {
        let s = sp("W3D:3");
        assert_eq!(s.find("g_{1,2}").unwrap(), s.find("d_{2,1}").unwrap());
        let c = s.find("c_{1,2}").unwrap();
        let e = s.find("e_{2,3}").unwrap();
        assert_eq!(s.third(c, e), Some(s.find("g_{1,3}").unwrap()));
    }

    #[test]
    fn space_automorphism_checks() {
        let s = sp("W3A:3");
        let id: Vec<usize> = (0..s.len()).collect();
        assert!(s.is_automorphism(&id));
        // swap two collinear points, fix everything else
        let p = s.find("b_{1,2}").unwrap();
        let q = s.find("b_{1,3}").unwrap();
        let mut perm = id.clone();
        perm.swap(p, q);
        assert!(!s.is_automorphism(&perm));
        assert!(!s.is_automorphism(&[0, 0]));
    }

    #[test]
    fn rejects_bad_bases() {
        let c4 = FiniteGroup::parse_cayley_table(
            "C4",
            "order 4\n0 1 2 3\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n",
        )
        .unwrap();
        assert!(matches!(
            FischerSpace::build_wreath(c4, 3),
            Err(Error::ThreeTranspositionViolation { order: 4, .. })
        ));
        assert!(FischerSpace::from_spec("W3A:1").is_err());
        assert!(FischerSpace::from_spec("Q8:3").is_err());
    }

    #[test]
    fn a_family_single_point() {
        let s = sp("A:2");
        assert_eq!((s.len(), s.line_count()), (1, 0));
    }
}
