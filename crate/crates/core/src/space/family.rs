use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupName};

/// The named wreath families and the base group each one is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `S_n` itself: `T` trivial.
    A,
    W2A,
    W3A,
    W2D,
    W3D,
    WrA4,
    Wr3p2,
    Wr3x3,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::A,
        Family::W2A,
        Family::W3A,
        Family::W2D,
        Family::W3D,
        Family::WrA4,
        Family::Wr3p2,
        Family::Wr3x3,
    ];

    pub fn base(self) -> GroupName {
        match self {
            Family::A => GroupName::C1,
            Family::W2A => GroupName::C2,
            Family::W3A => GroupName::C3,
            Family::W2D => GroupName::V4,
            Family::W3D => GroupName::S3,
            Family::WrA4 => GroupName::A4,
            Family::Wr3p2 => GroupName::E27,
            Family::Wr3x3 => GroupName::C3xC3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::W2A => "W2A",
            Family::W3A => "W3A",
            Family::W2D => "W2D",
            Family::W3D => "W3D",
            Family::WrA4 => "WrA4",
            Family::Wr3p2 => "Wr3p2",
            Family::Wr3x3 => "Wr3x3",
        }
    }

    /// Letter name of `t.(i,j)` with `i < j`, if the family has one.
    pub(crate) fn letter_label(self, group: &FiniteGroup, t: usize, i: usize, j: usize) -> Option<String> {
        let name = group.label(t);
        let (letter, swap) = match (self, name) {
            (Family::A, _) => ('b', false),
            (Family::W2A, "1") => ('b', false),
            (Family::W2A, "x") => ('c', false),
            (Family::W3A, "1") => ('b', false),
            (Family::W3A, "x") => ('c', false),
            (Family::W3A, "x2") => ('c', true),
            (Family::W2D, "1") => ('b', false),
            (Family::W2D, "e") => ('c', false),
            (Family::W2D, "f") => ('d', false),
            (Family::W2D, "ef") => ('e', false),
            (Family::W3D, "1") => ('b', false),
            (Family::W3D, "e") => ('c', false),
            (Family::W3D, "f") => ('d', false),
            (Family::W3D, "f2") => ('d', true),
            (Family::W3D, "ef2") => ('e', false),
            (Family::W3D, "ef") => ('f', false),
            _ => return None,
        };
        Some(if swap { format!("{letter}_{{{j},{i}}}") } else { format!("{letter}_{{{i},{j}}}") })
    }

    /// Extra display names: `g_{i,j}` for `d_{j,i}` in the S3 family.
    pub(crate) fn alias_labels(self, group: &FiniteGroup, t: usize, i: usize, j: usize) -> Vec<String> {
        match (self, group.label(t)) {
            (Family::W3D, "f2") => vec![format!("g_{{{i},{j}}}")],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}
