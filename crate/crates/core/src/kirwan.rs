//! The Kirwan map for a circle reduction at a level just below the maximum
//! of `φ = ⟨ψ, π⟩`.
//!
//! Each edge `qᵢ → q₀` into the maximum contributes one fixed point `pᵢ` of
//! the reduced space. Its residual torus is `T/S¹`, split inside the lattice
//! as `π^⊥`, and restriction to `pᵢ` is the projection
//! `X ↦ X − (X(π)/wᵢ(π))·wᵢ` that kills the edge weight.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cohomology::EquivClassH;
use crate::equivariant::{self, ClassError};
use crate::gkm::GkmGraph;
use crate::symcore::linalg::is_unimodular;
use crate::symcore::{LaurentPoly, PolyH, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoint {
    /// The vertex `qᵢ` at the far end of the edge into the maximum.
    pub source: usize,
    /// `w(qᵢ→q₀)`, the isotropy weight at `q₀` along the edge.
    pub edge_weight: Weight,
    /// Weights of the residual torus at `pᵢ`, in the original lattice.
    pub residual: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionSetup {
    /// Primitive covector generating the circle.
    pub pi: Vec<BigInt>,
    pub top: usize,
    pub reduced: Vec<ReducedPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KirwanError {
    InvalidCircle(String),
    NonUniqueMaximum,
    NotFreeAction { source: String },
    UnknownReducedPoint(String),
    Class(ClassError),
}

impl From<ClassError> for KirwanError {
    fn from(e: ClassError) -> Self {
        KirwanError::Class(e)
    }
}

impl fmt::Display for KirwanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KirwanError::InvalidCircle(m) => write!(f, "invalid circle: {m}"),
            KirwanError::NonUniqueMaximum => f.write_str("the maximum of <psi, pi> is not unique"),
            KirwanError::NotFreeAction { source } => {
                write!(f, "circle does not act freely near the edge from {source}")
            }
            KirwanError::UnknownReducedPoint(p) => write!(f, "no reduced point {p}"),
            KirwanError::Class(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for KirwanError {}

fn project_weight(u: &Weight, w: &Weight, pi: &[BigInt]) -> Option<Weight> {
    let (q, r) = u.dot(pi).div_rem(&w.dot(pi));
    r.is_zero().then(|| u - &w.scale(&q))
}

/// The reduced fixed points at the edges into the `⟨ψ, π⟩`-maximum.
pub fn reduced_fixed_data(g: &GkmGraph, pi: &[BigInt]) -> Result<ReductionSetup, KirwanError> {
    if pi.len() != g.rank() {
        return Err(KirwanError::InvalidCircle(alloc::format!(
            "expected {} coordinates, got {}",
            g.rank(),
            pi.len()
        )));
    }
    let content = pi.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
    if content.is_zero() {
        return Err(KirwanError::InvalidCircle("pi is zero".into()));
    }
    let pi: Vec<BigInt> = pi.iter().map(|c| c / &content).collect();
    let pi_q: Vec<BigRational> = pi.iter().cloned().map(BigRational::from_integer).collect();
    let phi: Vec<BigRational> = g
        .vertices()
        .iter()
        .map(|v| v.psi.iter().zip(&pi_q).fold(BigRational::zero(), |s, (a, b)| s + a * b))
        .collect();
    let max = phi.iter().max().expect("graph has vertices");
    let tops: Vec<usize> = (0..g.len()).filter(|&v| phi[v] == *max).collect();
    let [top] = tops[..] else {
        return Err(KirwanError::NonUniqueMaximum);
    };

    let iso = g.isotropy(top);
    let mut reduced = Vec::with_capacity(iso.len());
    for (source, w) in &iso {
        let not_free = || KirwanError::NotFreeAction {
            source: g.vertex(*source).id.clone(),
        };
        let residual = iso
            .iter()
            .filter(|(r, _)| r != source)
            .map(|(_, u)| project_weight(u, w, &pi))
            .collect::<Option<Vec<Weight>>>()
            .ok_or_else(not_free)?;
        let mut frame = residual.clone();
        frame.push(w.clone());
        if !is_unimodular(&frame) {
            return Err(not_free());
        }
        reduced.push(ReducedPoint {
            source: *source,
            edge_weight: w.clone(),
            residual,
        });
    }
    reduced.sort_by_key(|r| r.source);
    Ok(ReductionSetup { pi, top, reduced })
}

/// Ring map on H*_T(pt): `xₖ ↦ eₖ − (πₖ / w(π))·w`.
pub fn project_h(value: &PolyH, w: &Weight, pi: &[BigInt]) -> PolyH {
    let n = w.rank();
    let wpi = BigRational::from_integer(w.dot(pi));
    let images: Vec<PolyH> = (0..n)
        .map(|k| {
            let t = BigRational::from_integer(pi[k].clone()) / &wpi;
            let v: Vec<BigRational> = (0..n)
                .map(|j| {
                    let e = if j == k { BigRational::one() } else { BigRational::zero() };
                    e - &t * BigRational::from_integer(w.coords()[j].clone())
                })
                .collect();
            PolyH::linear(&v)
        })
        .collect();
    value.substitute(&images)
}

/// Multiplicative form on R(T): `e^v ↦ e^{v − (v(π)/w(π))·w}`; `None` if some
/// exponent does not project integrally.
pub fn project_k(value: &LaurentPoly, w: &Weight, pi: &[BigInt]) -> Option<LaurentPoly> {
    let ok = core::cell::Cell::new(true);
    let out = value.map_exponents(value.rank(), |v| {
        project_weight(v, w, pi).unwrap_or_else(|| {
            ok.set(false);
            v.clone()
        })
    });
    ok.get().then_some(out)
}

impl ReductionSetup {
    pub fn point(&self, source: usize) -> Option<&ReducedPoint> {
        self.reduced.iter().find(|r| r.source == source)
    }
}

/// `κ(c)(pᵢ)`, computed from `c(q₀)`.
pub fn kirwan_restrict(
    g: &GkmGraph,
    setup: &ReductionSetup,
    c: &EquivClassH,
    point: &ReducedPoint,
) -> Result<PolyH, KirwanError> {
    equivariant::require_gkm(g, c)?;
    Ok(project_h(c.value(setup.top), &point.edge_weight, &setup.pi))
}

/// `κ(c)(pᵢ)`, computed from `c(qᵢ)` instead; agrees with [`kirwan_restrict`].
pub fn kirwan_restrict_from_source(
    g: &GkmGraph,
    setup: &ReductionSetup,
    c: &EquivClassH,
    point: &ReducedPoint,
) -> Result<PolyH, KirwanError> {
    equivariant::require_gkm(g, c)?;
    Ok(project_h(c.value(point.source), &point.edge_weight, &setup.pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::EquivClass;
    use crate::fixtures;
    use crate::ktheory::local_index_k_trace;
    use crate::symcore::linalg::{inverse, mat_vec, to_rational_rows};

    fn w(c: &[i64]) -> Weight {
        Weight::from_i64s(c)
    }

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn form(c: &[i64]) -> PolyH {
        PolyH::from_weight(&w(c))
    }

    fn square_alpha(g: &GkmGraph) -> EquivClassH {
        let at = |id: &str| g.index_of(id).unwrap();
        let mut v = alloc::vec![PolyH::zero(2); 4];
        v[at("q0")] = form(&[1, 1]);
        v[at("q1")] = form(&[4, 1]);
        v[at("q2")] = form(&[1, 7]);
        v[at("q3")] = form(&[4, 7]);
        EquivClass::new(v)
    }

    #[test]
    fn square_reduction() {
        let g = fixtures::square();
        let setup = reduced_fixed_data(&g, &big(&[1, 1])).unwrap();
        assert_eq!(g.vertex(setup.top).id, "q0");
        assert_eq!(setup.reduced.len(), 2);
        let p1 = setup.point(g.index_of("q1").unwrap()).unwrap();
        let p2 = setup.point(g.index_of("q2").unwrap()).unwrap();
        assert_eq!(p1.edge_weight, w(&[1, 0]));
        assert_eq!(p2.edge_weight, w(&[0, 1]));
        assert_eq!(p1.residual, [w(&[-1, 1])]);
        assert_eq!(p2.residual, [w(&[1, -1])]);

        let alpha = square_alpha(&g);
        assert_eq!(kirwan_restrict(&g, &setup, &alpha, p1).unwrap(), form(&[-1, 1]));
        assert_eq!(kirwan_restrict(&g, &setup, &alpha, p2).unwrap(), form(&[1, -1]));
        assert_eq!(kirwan_restrict_from_source(&g, &setup, &alpha, p1).unwrap(), form(&[-1, 1]));
        assert_eq!(kirwan_restrict_from_source(&g, &setup, &alpha, p2).unwrap(), form(&[1, -1]));

        let one = EquivClassH::one(&g);
        for p in &setup.reduced {
            assert_eq!(kirwan_restrict(&g, &setup, &one, p).unwrap(), PolyH::one(2));
        }
    }

    #[test]
    fn cp1_has_one_point_and_no_residual_torus() {
        let g = fixtures::cp1();
        let setup = reduced_fixed_data(&g, &big(&[1])).unwrap();
        assert_eq!(setup.reduced.len(), 1);
        assert!(setup.reduced[0].residual.is_empty());
    }

    #[test]
    fn cp2_circles() {
        let g = fixtures::cp2();
        assert_eq!(reduced_fixed_data(&g, &big(&[1, 1])), Err(KirwanError::NonUniqueMaximum));
        let setup = reduced_fixed_data(&g, &big(&[0, 1])).unwrap();
        assert_eq!(g.vertex(setup.top).id, "p2");
        assert_eq!(setup.reduced.len(), 2);
        let residuals: Vec<Weight> = setup.reduced.iter().map(|r| r.residual[0].clone()).collect();
        assert_eq!(residuals, [w(&[-1, 0]), w(&[1, 0])]);
        assert!(matches!(
            reduced_fixed_data(&g, &big(&[1, 2])),
            Err(KirwanError::NotFreeAction { .. })
        ));
        // a non-primitive covector names the same circle
        assert_eq!(reduced_fixed_data(&g, &big(&[0, 3])), Ok(setup));
    }

    #[test]
    fn restriction_is_source_independent_and_lands_in_the_residual_span() {
        let g = fixtures::cpn(3);
        let setup = reduced_fixed_data(&g, &big(&[0, 0, 1])).unwrap();
        for p in 0..g.len() {
            let eta = crate::cohomology::poincare_dual_h(&g, p);
            for pt in &setup.reduced {
                let a = kirwan_restrict(&g, &setup, &eta, pt).unwrap();
                let b = kirwan_restrict_from_source(&g, &setup, &eta, pt).unwrap();
                assert_eq!(a, b);
                assert_eq!(project_h(&a, &pt.edge_weight, &setup.pi), a);
            }
        }
    }

    #[test]
    fn local_index_substitutions_are_kirwan_projections() {
        let g = fixtures::hirzebruch();
        let e = |c: &[i64]| LaurentPoly::exp(&w(c));
        let om = |c: &[i64]| LaurentPoly::one_minus_exp(&w(c));
        let c = EquivClass::new(alloc::vec![
            LaurentPoly::zero(2),
            om(&[1, 1]),
            om(&[1, -1]).mul(&e(&[0, 1])),
            LaurentPoly::zero(2),
        ]);
        let q = 2;
        let trace = local_index_k_trace(&g, &c, q).unwrap();
        let lambda = g.lambda(q);
        // Circle on the rank n+1 lattice: pairs w₀ to −1, W⁺(q) to 1, the rest to 0.
        let mut frame: Vec<Weight> = trace.basis.iter().map(|b| b.extend(1)).collect();
        let w0 = Weight::unit(3, 2);
        frame.push(w0.clone());
        let target: Vec<BigRational> = (0..3)
            .map(|i| {
                let v = if i == 2 { -1 } else if i < lambda { 1 } else { 0 };
                BigRational::from_integer(v.into())
            })
            .collect();
        let circle: Vec<BigInt> = mat_vec(&inverse(&to_rational_rows(&frame)).unwrap(), &target)
            .into_iter()
            .map(|c| c.to_integer())
            .collect();
        let lifted = c.value(q).extend_rank(1);
        assert_eq!(project_k(&lifted, &-&w0, &circle).unwrap(), trace.f[0]);
        for j in 0..lambda {
            assert_eq!(project_k(&lifted, &frame[j], &circle).unwrap(), trace.f[j + 1]);
        }
        assert_eq!(trace.f[0], om(&[1, -1, 0]).mul(&e(&[0, 1, 1])));
        assert_eq!(trace.f[1], om(&[1, -1, 0]));
    }
}
