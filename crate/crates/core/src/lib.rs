//! Exact computations in Matsuo algebras of wreath-product 3-transposition
//! groups over the rational-function field Q(eta).

pub mod algebra;
pub mod classify;
pub mod axial;
pub mod closure;
pub mod flip;
pub mod error;
pub mod group;
pub mod linalg;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
