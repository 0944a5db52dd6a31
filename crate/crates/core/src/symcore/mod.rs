//! Exact arithmetic in R(T), H*_T(pt) and their localizations.

pub mod laurent;
pub mod linalg;
pub mod localized;
pub mod polyh;
pub mod weight;

use core::fmt;

pub use laurent::LaurentPoly;
pub use linalg::{unimodular_completion, UnimodularCompletion};
pub use localized::{LocalRing, LocalizedSum, Mode, Reduced};
pub use polyh::PolyH;
pub use weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithError {
    RankMismatch { left: usize, right: usize },
    ZeroWeight,
    NotDivisible,
    NotUnimodular,
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::RankMismatch { left, right } => {
                write!(f, "rank mismatch: {left} vs {right}")
            }
            ArithError::ZeroWeight => f.write_str("zero weight"),
            ArithError::NotDivisible => f.write_str("not divisible"),
            ArithError::NotUnimodular => f.write_str("basis is not unimodular"),
        }
    }
}

impl core::error::Error for ArithError {}
