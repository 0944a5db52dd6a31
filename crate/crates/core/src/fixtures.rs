//! Standard toric manifolds used throughout the tests and the CLI.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::gkm::{GkmGraph, ToricInput};

pub fn cp1_input() -> ToricInput {
    ToricInput::from_integer_vertices(1, &[("p0", &[0]), ("p1", &[1])])
}

pub fn cp2_input() -> ToricInput {
    ToricInput::from_integer_vertices(2, &[("p0", &[0, 0]), ("p1", &[1, 0]), ("p2", &[0, 1])])
}

/// The standard simplex: `p0 = 0`, `pᵢ = eᵢ`.
pub fn cpn_input(n: usize) -> ToricInput {
    let mut vertices = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let psi = (0..n)
            .map(|k| BigRational::from_integer(((i > 0 && k == i - 1) as i64).into()))
            .collect();
        vertices.push((format!("p{i}"), psi));
    }
    ToricInput {
        rank: n,
        vertices,
        edges: None,
        xi: None,
    }
}

/// Hirzebruch trapezoid with edge labels y, y−x, x+y; with ξ = (1, 2) the
/// orientation is not index increasing.
pub fn hirzebruch_input() -> ToricInput {
    ToricInput::from_integer_vertices(
        2,
        &[("p0", &[0, 0]), ("p1", &[1, 1]), ("p2", &[1, 2]), ("p3", &[0, 3])],
    )
}

/// Unit square with corners labelled as in the circle-reduction example;
/// `q0 = (1,1)` is the maximum of `⟨ψ, (1,1)⟩`.
pub fn square_input() -> ToricInput {
    ToricInput::from_integer_vertices(
        2,
        &[("q3", &[0, 0]), ("q1", &[0, 1]), ("q2", &[1, 0]), ("q0", &[1, 1])],
    )
}

fn build(input: ToricInput) -> GkmGraph {
    GkmGraph::from_input(&input).expect("fixture is a valid Delzant polytope")
}

pub fn cp1() -> GkmGraph {
    build(cp1_input())
}

pub fn cp2() -> GkmGraph {
    build(cp2_input())
}

pub fn cpn(n: usize) -> GkmGraph {
    build(cpn_input(n))
}

pub fn hirzebruch() -> GkmGraph {
    build(hirzebruch_input())
}

pub fn square() -> GkmGraph {
    build(square_input())
}

/// Every named fixture, resolved with its default ξ.
pub fn all() -> Vec<GkmGraph> {
    alloc::vec![cp1(), cp2(), cpn(3), hirzebruch(), square()]
}

/// Looks up `cp1`, `cp2`, `cpn:k`, `hirzebruch`, or `square`.
pub fn by_name(name: &str) -> Option<ToricInput> {
    match name {
        "cp1" => Some(cp1_input()),
        "cp2" => Some(cp2_input()),
        "hirzebruch" => Some(hirzebruch_input()),
        "square" => Some(square_input()),
        _ => {
            let k: usize = name.strip_prefix("cpn:")?.parse().ok()?;
            (k >= 1).then(|| cpn_input(k))
        }
    }
}

pub fn names() -> Vec<String> {
    ["cp1", "cp2", "cpn:k", "hirzebruch", "square"]
        .iter()
        .map(|s| String::from(*s))
        .collect()
}
