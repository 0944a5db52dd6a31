//! One-skeleton of a full-dimensional polytope given by its vertices.
//!
//! Facets are found by brute force over affinely independent n-subsets; a
//! vertex pair spans an edge iff the facets through both cut out exactly that
//! pair. Exhaustive, exact, and adequate at desk scale.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::symcore::linalg::{kernel_line, rank, QMatrix};

type Point = Vec<BigRational>;

fn sub(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &Point, b: &Point) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
}

fn affine_rank(points: &[Point], idx: &[usize]) -> usize {
    let Some((&first, rest)) = idx.split_first() else {
        return 0;
    };
    if rest.is_empty() {
        return 0;
    }
    let rows: QMatrix = rest.iter().map(|&i| sub(&points[i], &points[first])).collect();
    rank(&rows)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Vertex sets of the facets of `conv(points)`. `None` if the hull is not
/// full-dimensional.
pub fn facets(points: &[Point], dim: usize) -> Option<Vec<BTreeSet<usize>>> {
    let all: Vec<usize> = (0..points.len()).collect();
    if affine_rank(points, &all) != dim {
        return None;
    }
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for subset in combinations(points.len(), dim) {
        if affine_rank(points, &subset) + 1 != dim {
            continue;
        }
        let normal = if dim == 1 {
            alloc::vec![BigRational::from_integer(1.into())]
        } else {
            let rows: QMatrix = subset[1..]
                .iter()
                .map(|&i| sub(&points[i], &points[subset[0]]))
                .collect();
            kernel_line(&rows, dim)?
        };
        let offset = dot(&normal, &points[subset[0]]);
        let side: Vec<BigRational> = points.iter().map(|p| dot(&normal, p) - &offset).collect();
        let pos = side.iter().any(Signed::is_positive);
        let neg = side.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        found.insert((0..points.len()).filter(|&i| side[i].is_zero()).collect());
    }
    Some(found.into_iter().collect())
}

/// Smallest face containing the given vertices: the intersection of all
/// facets through them (the whole vertex set if there are none).
fn face_hull(facets: &[BTreeSet<usize>], n_points: usize, members: &[usize]) -> BTreeSet<usize> {
    facets
        .iter()
        .filter(|f| members.iter().all(|m| f.contains(m)))
        .fold((0..n_points).collect(), |acc: BTreeSet<usize>, f| {
            acc.intersection(f).copied().collect()
        })
}

/// Indices of points that are not vertices of their hull.
pub fn non_vertices(points: &[Point], facets: &[BTreeSet<usize>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| face_hull(facets, points.len(), &[i]).len() != 1)
        .collect()
}

/// Vertex pairs spanning edges of the hull.
pub fn edges(points: &[Point], facets: &[BTreeSet<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let face = face_hull(facets, points.len(), &[i, j]);
            if face.len() == 2 {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter()
            .map(|p| p.iter().map(|&c| BigRational::from_integer(c.into())).collect())
            .collect()
    }

    #[test]
    fn triangle_edges() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let f = facets(&p, 2).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(edges(&p, &f), alloc::vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn square_has_no_diagonals() {
        let p = pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let f = facets(&p, 2).unwrap();
        assert_eq!(edges(&p, &f), alloc::vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn subdivided_segment_and_interior_points() {
        let p = pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 2], &[0, 1]]);
        let f = facets(&p, 2).unwrap();
        let nv = non_vertices(&p, &f);
        assert_eq!(nv, alloc::vec![1, 4]);
    }

    #[test]
    fn cube_has_twelve_edges() {
        let mut v = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    v.push(alloc::vec![a, b, c]);
                }
            }
        }
        let refs: Vec<&[i64]> = v.iter().map(Vec::as_slice).collect();
        let p = pts(&refs);
        let f = facets(&p, 3).unwrap();
        assert_eq!(f.len(), 6);
        assert_eq!(edges(&p, &f).len(), 12);
    }

    #[test]
    fn flat_input_is_rejected() {
        let p = pts(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert!(facets(&p, 2).is_none());
    }

    #[test]
    fn segment() {
        let p = pts(&[&[0], &[1]]);
        let f = facets(&p, 1).unwrap();
        assert_eq!(edges(&p, &f), alloc::vec![(0, 1)]);
    }
}
