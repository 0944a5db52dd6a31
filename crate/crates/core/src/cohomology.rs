//! Equivariant cohomology: restriction tables with values in H*_T(pt).

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::equivariant::{self, id, ClassError, EquivClass, GkmViolation, LocalIndexTrace, StructureConstants};
use crate::gkm::{Edge, GkmGraph};
use crate::symcore::{LocalizedSum, PolyH, Reduced, Weight};

pub type EquivClassH = EquivClass<PolyH>;

/// `Λ_p⁻ = ∏_{w ∈ W⁺(p)} w`.
pub fn euler_minus_h(g: &GkmGraph, p: usize) -> PolyH {
    equivariant::euler_minus(g, p)
}

pub fn check_gkm_h(g: &GkmGraph, c: &EquivClassH) -> Result<(), GkmViolation<PolyH>> {
    equivariant::check_gkm(g, c)
}

pub fn poincare_dual_h(g: &GkmGraph, p: usize) -> EquivClassH {
    equivariant::poincare_dual(g, p)
}

pub fn is_kirwan_class_h(g: &GkmGraph, c: &EquivClassH, p: usize) -> bool {
    equivariant::is_kirwan_class(g, c, p)
}

/// Atiyah–Bott–Berline–Vergne integral `Σ_p c(p) / ∏_{w ∈ W_p} w`.
pub fn abbv_index(g: &GkmGraph, c: &EquivClassH) -> Result<PolyH, ClassError> {
    equivariant::require_gkm(g, c)?;
    equivariant::global_index(g, c)
}

/// Local index at `q`; zero without computation when `deg c(q) < λ_q`.
pub fn local_index_h(g: &GkmGraph, c: &EquivClassH, q: usize) -> Result<PolyH, ClassError> {
    equivariant::check_shape(g, c)?;
    match c.value(q).degree() {
        Some(d) if d as usize >= g.lambda(q) => equivariant::local_index(g, c, q),
        _ => {
            equivariant::require_gkm(g, c)?;
            Ok(PolyH::zero(g.rank()))
        }
    }
}

pub fn local_index_h_trace(
    g: &GkmGraph,
    c: &EquivClassH,
    q: usize,
) -> Result<LocalIndexTrace<PolyH>, ClassError> {
    equivariant::local_index_trace(g, c, q)
}

/// The canonical classes: Poincaré duals, checked against the local-index
/// conditions `Ind_p(τ_p) = 1`, `Ind_q(τ_p) = 0` for `q ≠ p`.
pub fn icanonical_basis_h(g: &GkmGraph) -> Result<Vec<EquivClassH>, ClassError> {
    let basis: Vec<EquivClassH> = (0..g.len()).map(|p| poincare_dual_h(g, p)).collect();
    verify_icanonical_h(g, &basis)?;
    Ok(basis)
}

pub fn verify_icanonical_h(g: &GkmGraph, basis: &[EquivClassH]) -> Result<(), ClassError> {
    let one = PolyH::one(g.rank());
    let zero = PolyH::zero(g.rank());
    for (p, tau) in basis.iter().enumerate() {
        if !is_kirwan_class_h(g, tau, p) {
            return Err(ClassError::VerificationFailure(alloc::format!(
                "tau_{} is not a Kirwan class",
                id(g, p)
            )));
        }
        for q in 0..g.len() {
            let expect = if q == p { &one } else { &zero };
            if local_index_h(g, tau, q)? != *expect {
                return Err(ClassError::VerificationFailure(alloc::format!(
                    "tau_{} has the wrong local index at {}",
                    id(g, p),
                    id(g, q)
                )));
            }
        }
    }
    Ok(())
}

pub fn expand_in_basis_h(
    g: &GkmGraph,
    basis: &[EquivClassH],
    c: &EquivClassH,
) -> Result<Vec<PolyH>, ClassError> {
    equivariant::expand_in_basis(g, basis, c)
}

pub fn structure_constants_h(
    g: &GkmGraph,
    basis: &[EquivClassH],
) -> Result<StructureConstants<PolyH>, ClassError> {
    equivariant::structure_constants(g, basis)
}

fn xi_rational(g: &GkmGraph) -> Vec<BigRational> {
    g.xi().iter().cloned().map(BigRational::from_integer).collect()
}

/// `ρ_w(X) = X − (X(ξ)/w(ξ))·w`, on coefficient vectors of linear forms.
pub fn rho(x: &[BigRational], w: &Weight, xi: &[BigRational]) -> Vec<BigRational> {
    let dot = |v: &[BigRational]| v.iter().zip(xi).fold(BigRational::zero(), |s, (a, b)| s + a * b);
    let wq = w.to_rational();
    let t = dot(x) / dot(&wq);
    x.iter().zip(&wq).map(|(a, b)| a - &t * b).collect()
}

/// `Θ(r₁, r₂)` for an edge raising the index by one: the ratio of the
/// ρ-projections of `Λ_{r₁}⁻` and `Λ_{r₂}⁻/w`.
pub fn theta(g: &GkmGraph, edge: &Edge) -> Result<BigRational, ClassError> {
    let (r1, r2) = (edge.src, edge.dst);
    let names = || (id(g, r1), id(g, r2));
    if g.lambda(r2) != g.lambda(r1) + 1 {
        let (src, dst) = names();
        return Err(ClassError::NotECanEdge { src, dst });
    }
    let non_constant = || {
        let (src, dst) = names();
        ClassError::NonConstantQuotient { src, dst }
    };
    let xi = xi_rational(g);
    let w = &edge.weight;
    let mut num = PolyH::one(g.rank());
    for u in g.wplus(r1) {
        num = num.mul(&PolyH::linear(&rho(&u.to_rational(), w, &xi)));
    }
    let mut rest: Vec<Weight> = g.wplus(r2).to_vec();
    let k = rest.iter().position(|u| u == w).ok_or_else(non_constant)?;
    rest.remove(k);
    for u in &rest {
        let d = rho(&u.to_rational(), w, &xi);
        if d.iter().all(Zero::is_zero) {
            return Err(non_constant());
        }
        num = num.divide_by_linear(&d).map_err(|_| non_constant())?;
    }
    num.as_constant().ok_or_else(non_constant)
}

fn canonical_paths(g: &GkmGraph, p: usize, q: usize) -> Vec<Vec<usize>> {
    fn walk(g: &GkmGraph, v: usize, q: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == q {
            out.push(path.clone());
            return;
        }
        for &e in &g.vertex(v).outgoing {
            let edge = &g.edges()[e];
            if g.lambda(edge.dst) == g.lambda(v) + 1 && g.vertex(edge.dst).mu <= g.vertex(q).mu {
                path.push(e);
                walk(g, edge.dst, q, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, p, q, &mut Vec::new(), &mut out);
    out
}

/// The GT class `ζ_p` from the Θ-weighted sum over increasing
/// paths in the index-jump-one subgraph. Moment-map differences enter as
/// linear forms, so each path contributes a rational function.
pub fn gt_class(g: &GkmGraph, p: usize) -> Result<EquivClassH, ClassError> {
    if let Some(e) = g.index_increasing_witness() {
        return Err(ClassError::NotIndexIncreasing {
            src: id(g, e.src),
            dst: id(g, e.dst),
        });
    }
    let n = g.rank();
    let mut values = Vec::with_capacity(g.len());
    for q in 0..g.len() {
        let paths = canonical_paths(g, p, q);
        let mut sum = LocalizedSum::new(n);
        for path in &paths {
            let mut num = euler_minus_h(g, q);
            let mut den = Vec::with_capacity(2 * path.len());
            for &ei in path {
                let e = &g.edges()[ei];
                let step = PolyH::linear(&g.psi_difference(e.src, e.dst));
                num = num.mul(&step).scale(&theta(g, e)?);
                let (u, m) = Weight::primitive_direction(&g.psi_difference(e.src, q))
                    .expect("path vertices precede q");
                num = num.scale(&(BigRational::one() / m));
                den.push(u);
                den.push(e.weight.clone());
            }
            sum.push(num, den)?;
        }
        let value = match sum.reduce()? {
            Reduced::Polynomial(v) => v,
            Reduced::Irreducible { .. } => {
                return Err(ClassError::IntegralityFailure { vertex: id(g, q) })
            }
        };
        if !value.is_integral() {
            return Err(ClassError::IntegralityFailure { vertex: id(g, q) });
        }
        values.push(value);
    }
    Ok(EquivClass::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gkm::GkmGraph;

    fn x() -> PolyH {
        PolyH::var(2, 0)
    }

    fn y() -> PolyH {
        PolyH::var(2, 1)
    }

    fn zero2() -> PolyH {
        PolyH::zero(2)
    }

    #[test]
    fn euler_classes_on_cp2() {
        let g = fixtures::cp2();
        assert_eq!(euler_minus_h(&g, 2), y().mul(&y().sub(&x())));
        assert_eq!(euler_minus_h(&g, 0), PolyH::one(2));
        assert_eq!(euler_minus_h(&g, 1), x());
    }

    #[test]
    fn poincare_duals() {
        let g = fixtures::cp2();
        assert_eq!(poincare_dual_h(&g, 1), EquivClass::new(alloc::vec![zero2(), x(), y()]));
        for g in fixtures::all() {
            assert_eq!(poincare_dual_h(&g, 0), EquivClassH::one(&g));
            for p in 0..g.len() {
                let eta = poincare_dual_h(&g, p);
                assert_eq!(*eta.value(p), euler_minus_h(&g, p));
                assert!(check_gkm_h(&g, &eta).is_ok());
                assert!(is_kirwan_class_h(&g, &eta, p));
                for v in eta.values() {
                    assert!(v.is_zero() || v.degree() == Some(g.lambda(p) as u32));
                    assert!(v.is_homogeneous());
                }
            }
        }
    }

    #[test]
    fn abbv_examples() {
        let g = fixtures::cp2();
        assert!(abbv_index(&g, &EquivClassH::one(&g)).unwrap().is_zero());
        assert_eq!(abbv_index(&g, &poincare_dual_h(&g, 2)).unwrap(), PolyH::one(2));
        let g = fixtures::cp1();
        let c = EquivClass::new(alloc::vec![PolyH::zero(1), PolyH::var(1, 0)]);
        assert_eq!(abbv_index(&g, &c).unwrap(), PolyH::one(1));
    }

    #[test]
    fn local_indices_of_poincare_duals() {
        for g in fixtures::all() {
            let one = EquivClassH::one(&g);
            for q in 1..g.len() {
                assert!(local_index_h(&g, &one, q).unwrap().is_zero());
            }
            for p in 0..g.len() {
                let eta = poincare_dual_h(&g, p);
                for q in 0..g.len() {
                    let ind = local_index_h(&g, &eta, q).unwrap();
                    assert_eq!(ind == PolyH::one(g.rank()), p == q);
                    assert_eq!(ind.is_zero(), p != q);
                }
            }
        }
    }

    #[test]
    fn cp2_basis() {
        let g = fixtures::cp2();
        let b = icanonical_basis_h(&g).unwrap();
        assert_eq!(b[0], EquivClassH::one(&g));
        assert_eq!(b[1], EquivClass::new(alloc::vec![zero2(), x(), y()]));
        assert_eq!(b[2], EquivClass::new(alloc::vec![zero2(), zero2(), y().mul(&y().sub(&x()))]));
        assert_eq!(icanonical_basis_h(&fixtures::hirzebruch()).unwrap().len(), 4);
    }

    #[test]
    fn theta_is_one_on_canonical_edges() {
        for g in fixtures::all() {
            for e in g.canonical_edges() {
                assert!(theta(&g, e).unwrap().is_one());
            }
        }
        let g = fixtures::cp2();
        let jump_two = g.edge_between(0, 2).unwrap();
        assert!(matches!(theta(&g, jump_two), Err(ClassError::NotECanEdge { .. })));
    }

    #[test]
    fn gt_classes_on_cp2() {
        let g = fixtures::cp2();
        let z1 = gt_class(&g, 1).unwrap();
        assert_eq!(*z1.value(2), y());
        for p in 0..g.len() {
            let z = gt_class(&g, p).unwrap();
            assert_eq!(*z.value(p), euler_minus_h(&g, p));
            let up = g.upward_closure(p);
            assert_eq!(z.support(), up);
            assert_eq!(z, poincare_dual_h(&g, p));
        }
    }

    #[test]
    fn gt_classes_are_xi_independent() {
        let cases: [(crate::gkm::ToricInput, &[i64], &[i64]); 3] = [
            (fixtures::cp1_input(), &[1], &[3]),
            (fixtures::cp2_input(), &[1, 2], &[2, 3]),
            (fixtures::cpn_input(3), &[1, 2, 4], &[1, 3, 5]),
        ];
        for (input, xa, xb) in cases {
            let a = GkmGraph::from_input(&input.clone().with_xi(xa)).unwrap();
            let b = GkmGraph::from_input(&input.with_xi(xb)).unwrap();
            assert_eq!(a.edges(), b.edges());
            for p in 0..a.len() {
                assert_eq!(gt_class(&a, p).unwrap(), gt_class(&b, p).unwrap());
            }
        }
    }

    #[test]
    fn gt_requires_index_increasing() {
        let g = fixtures::hirzebruch();
        assert!(matches!(gt_class(&g, 0), Err(ClassError::NotIndexIncreasing { .. })));
    }
}
