//! Collinearity diagrams on the support `{a, b, c, d, e}` of a type-D
//! generating set `a, b + c, d + e`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const ROLES: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

/// The eight admissible edges, most significant bit first. `bc` and `de`
/// never occur.
pub const EDGE_ORDER: [(usize, usize); 8] = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)];

/// Vertex permutations fixing `a` and preserving `{b,c}, {d,e}` as a pair
/// of pairs.
pub const SYMMETRIES: [[usize; 5]; 8] = [
    [0, 1, 2, 3, 4],
    [0, 2, 1, 3, 4],
    [0, 1, 2, 4, 3],
    [0, 2, 1, 4, 3],
    [0, 3, 4, 1, 2],
    [0, 4, 3, 1, 2],
    [0, 3, 4, 2, 1],
    [0, 4, 3, 2, 1],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    adj: [[bool; 5]; 5],
}

/// A canonical diagram code: the minimum edge mask over [`SYMMETRIES`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiagramCode(pub u8);

impl Diagram {
    pub fn from_adjacency(adj: [[bool; 5]; 5]) -> Result<Self> {
        for x in 0..5 {
            if adj[x][x] {
                return Err(Error::InvalidConfiguration("diagram has a loop".into()));
            }
            for y in 0..5 {
                if adj[x][y] != adj[y][x] {
                    return Err(Error::InvalidConfiguration("diagram is not symmetric".into()));
                }
            }
        }
        if adj[1][2] || adj[3][4] {
            return Err(Error::InvalidConfiguration(
                "double-axis constituents must be non-collinear".into(),
            ));
        }
        Ok(Diagram { adj })
    }

    /// Builds a diagram from edges named by role letters, e.g. `["ab", "ad"]`.
    pub fn from_edges(edges: &[&str]) -> Result<Self> {
        let mut adj = [[false; 5]; 5];
        for e in edges {
            let idx: Vec<usize> = e
                .chars()
                .map(|c| ROLES.iter().position(|&r| r == c))
                .collect::<Option<_>>()
                .filter(|v: &Vec<usize>| v.len() == 2 && v[0] != v[1])
                .ok_or_else(|| Error::Parse(format!("bad diagram edge {e:?}")))?;
            adj[idx[0]][idx[1]] = true;
            adj[idx[1]][idx[0]] = true;
        }
        Self::from_adjacency(adj)
    }

    pub(crate) fn from_mask(mask: u8) -> Self {
        let mut adj = [[false; 5]; 5];
        for (k, &(x, y)) in EDGE_ORDER.iter().enumerate() {
            if mask & (0x80 >> k) != 0 {
                adj[x][y] = true;
                adj[y][x] = true;
            }
        }
        Diagram { adj }
    }

    pub fn adjacency(&self) -> [[bool; 5]; 5] {
        self.adj
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x][y]
    }

    pub fn mask(&self) -> u8 {
        EDGE_ORDER
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| self.adj[x][y])
            .fold(0u8, |m, (k, _)| m | (0x80 >> k))
    }

    /// The diagram relabelled by `sym`: vertex `v` moves to `sym[v]`.
    pub fn permuted(&self, sym: &[usize; 5]) -> Diagram {
        let mut adj = [[false; 5]; 5];
        for x in 0..5 {
            for y in 0..5 {
                adj[sym[x]][sym[y]] = self.adj[x][y];
            }
        }
        Diagram { adj }
    }

    pub fn canonical(&self) -> DiagramCode {
        DiagramCode(SYMMETRIES.iter().map(|s| self.permuted(s).mask()).min().unwrap())
    }

    pub fn edge_count(&self) -> usize {
        self.mask().count_ones() as usize
    }

    /// Connected components over vertices `0..5`, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = [usize::MAX; 5];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..5 {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut stack = vec![s];
            comp[s] = c;
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in 0..5 {
                    if self.adj[x][y] && comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

impl DiagramCode {
    pub fn diagram(self) -> Diagram {
        Diagram::from_mask(self.0)
    }

    /// Edge list such as `ab,ad,be`; `none` for the empty diagram.
    pub fn edge_string(self) -> String {
        let edges: Vec<String> = EDGE_ORDER
            .iter()
            .enumerate()
            .filter(|(k, _)| self.0 & (0x80 >> k) != 0)
            .map(|(_, &(x, y))| format!("{}{}", ROLES[x], ROLES[y]))
            .collect();
        if edges.is_empty() {
            "none".into()
        } else {
            edges.join(",")
        }
    }
}

impl fmt::Display for DiagramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08b}", self.0)
    }
}

/// All canonical codes, ascending.
pub fn all_canonical_codes() -> Vec<DiagramCode> {
    let mut codes: Vec<DiagramCode> = (0..=255u8).map(|m| Diagram::from_mask(m).canonical()).collect();
    codes.sort();
    codes.dedup();
    codes
}
