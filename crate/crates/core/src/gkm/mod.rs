//! GKM graphs of symplectic toric manifolds: ingestion, validation,
//! orientation by a generic component of the moment map, and the derived
//! combinatorics (Morse indices, flow faces, upward closures).

mod graph;
pub mod hull;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use graph::{build_graph, choose_generic_xi, orient_and_index, Direction, Edge, FixedPoint, GkmGraph, ToricGraph};

/// A Delzant polytope by vertices, optionally with its edges and a generic ξ.
#[derive(Clone, Debug, PartialEq)]
pub struct ToricInput {
    pub rank: usize,
    pub vertices: Vec<(String, Vec<BigRational>)>,
    pub edges: Option<Vec<(String, String)>>,
    pub xi: Option<Vec<BigInt>>,
}

impl ToricInput {
    pub fn from_integer_vertices(rank: usize, vertices: &[(&str, &[i64])]) -> Self {
        ToricInput {
            rank,
            vertices: vertices
                .iter()
                .map(|(id, psi)| {
                    let p = psi.iter().map(|&c| BigRational::from_integer(c.into())).collect();
                    (String::from(*id), p)
                })
                .collect(),
            edges: None,
            xi: None,
        }
    }

    pub fn with_xi(mut self, xi: &[i64]) -> Self {
        self.xi = Some(xi.iter().map(|&c| BigInt::from(c)).collect());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    InvalidInput(String),
    UnknownVertex(String),
    NotAPolytopeSkeleton(String),
    NotDelzant { vertex: String },
    SuppliedXiNotGeneric,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidInput(m) => write!(f, "invalid input: {m}"),
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex {v:?}"),
            GraphError::NotAPolytopeSkeleton(m) => write!(f, "not a polytope skeleton: {m}"),
            GraphError::NotDelzant { vertex } => {
                write!(f, "weights at vertex {vertex:?} do not form a Z-basis")
            }
            GraphError::SuppliedXiNotGeneric => f.write_str("supplied xi is not generic"),
        }
    }
}

impl core::error::Error for GraphError {}
