//! Equivariant K-theory: restriction tables with values in R(T).

use alloc::vec::Vec;

use crate::equivariant::{self, id, ClassError, EquivClass, GkmViolation, LocalIndexTrace, StructureConstants};
use crate::gkm::{Direction, GkmGraph};
use crate::symcore::{LaurentPoly, Weight};

pub type EquivClassK = EquivClass<LaurentPoly>;

/// `∏_{w ∈ W⁺(p)} (1 − e^w)`.
pub fn euler_minus_k(g: &GkmGraph, p: usize) -> LaurentPoly {
    equivariant::euler_minus(g, p)
}

pub fn check_gkm_k(g: &GkmGraph, c: &EquivClassK) -> Result<(), GkmViolation<LaurentPoly>> {
    equivariant::check_gkm(g, c)
}

pub fn poincare_dual_k(g: &GkmGraph, p: usize) -> EquivClassK {
    equivariant::poincare_dual(g, p)
}

pub fn is_kirwan_class_k(g: &GkmGraph, c: &EquivClassK, p: usize) -> bool {
    equivariant::is_kirwan_class(g, c, p)
}

/// Atiyah–Segal index `Σ_p c(p) / ∏_{w ∈ W_p} (1 − e^w)`.
pub fn atiyah_segal_index(g: &GkmGraph, c: &EquivClassK) -> Result<LaurentPoly, ClassError> {
    equivariant::require_gkm(g, c)?;
    equivariant::global_index(g, c)
}

pub fn local_index_k(g: &GkmGraph, c: &EquivClassK, q: usize) -> Result<LaurentPoly, ClassError> {
    equivariant::local_index(g, c, q)
}

pub fn local_index_k_trace(
    g: &GkmGraph,
    c: &EquivClassK,
    q: usize,
) -> Result<LocalIndexTrace<LaurentPoly>, ClassError> {
    equivariant::local_index_trace(g, c, q)
}

/// The i-canonical classes `τ_p`, indexed in ≺ order.
///
/// On index-increasing graphs these are the Poincaré duals. Otherwise each
/// `τ_p` is corrected inductively along `V_p⁺` by multiples of Poincaré duals
/// until its local indices are 1 on `F_p` and 0 elsewhere.
pub fn icanonical_basis_k(g: &GkmGraph) -> Result<Vec<EquivClassK>, ClassError> {
    let etas: Vec<EquivClassK> = (0..g.len()).map(|p| poincare_dual_k(g, p)).collect();
    if g.is_index_increasing() {
        return Ok(etas);
    }
    let one = LaurentPoly::one(g.rank());
    (0..g.len())
        .map(|p| {
            let face = g.flow_face(p, Direction::Up);
            let mut a = etas[p].clone();
            for &q in g.upward_closure(p).iter().skip(1) {
                let ind = local_index_k(g, &a, q)?;
                let coeff = if face.contains(&q) { one.sub(&ind) } else { ind.neg() };
                if !coeff.is_zero() {
                    a = a.add(&etas[q].scale(&coeff));
                }
            }
            Ok(a)
        })
        .collect()
}

/// Checks the defining properties of an i-canonical basis.
pub fn verify_icanonical_k(g: &GkmGraph, basis: &[EquivClassK]) -> Result<(), ClassError> {
    let one = LaurentPoly::one(g.rank());
    let zero = LaurentPoly::zero(g.rank());
    for (p, tau) in basis.iter().enumerate() {
        let fail = |what: &str| ClassError::VerificationFailure(alloc::format!("tau_{}: {what}", id(g, p)));
        equivariant::require_gkm(g, tau)?;
        if !is_kirwan_class_k(g, tau, p) {
            return Err(fail("not a Kirwan class"));
        }
        let up = g.upward_closure(p);
        if tau.support().iter().any(|q| !up.contains(q)) {
            return Err(fail("support leaves the upward closure"));
        }
        let face = g.flow_face(p, Direction::Up);
        for q in 0..g.len() {
            let expect = if face.contains(&q) { &one } else { &zero };
            if local_index_k(g, tau, q)? != *expect {
                return Err(fail(&alloc::format!("wrong local index at {}", id(g, q))));
            }
        }
    }
    Ok(())
}

pub fn expand_in_basis_k(
    g: &GkmGraph,
    basis: &[EquivClassK],
    c: &EquivClassK,
) -> Result<Vec<LaurentPoly>, ClassError> {
    equivariant::expand_in_basis(g, basis, c)
}

pub fn structure_constants_k(
    g: &GkmGraph,
    basis: &[EquivClassK],
) -> Result<StructureConstants<LaurentPoly>, ClassError> {
    equivariant::structure_constants(g, basis)
}

/// `ψ(p)` as a lattice vector, when it is one.
pub fn psi_weight(g: &GkmGraph, p: usize) -> Option<Weight> {
    let psi = &g.vertex(p).psi;
    psi.iter()
        .all(|c| c.is_integer())
        .then(|| Weight::new(psi.iter().map(|c| c.to_integer()).collect()))
}

/// The prequantization line bundle: restriction `e^{ψ(s)}` at `s`.
pub fn prequantization_class(g: &GkmGraph) -> Option<EquivClassK> {
    let values = (0..g.len())
        .map(|s| psi_weight(g, s).map(|w| LaurentPoly::exp(&w)))
        .collect::<Option<Vec<_>>>()?;
    Some(EquivClass::new(values))
}

/// CPⁿ with its classes `τ_p = ∏_{q ≺ p} (𝟏 − e^{−ψ(q)}·𝕃)`, `𝕃` the
/// prequantization bundle; verified equal to [`icanonical_basis_k`].
pub fn cpn_prequantization_basis(n: usize) -> Result<(GkmGraph, Vec<EquivClassK>), ClassError> {
    let g = crate::fixtures::cpn(n);
    let l = prequantization_class(&g).expect("simplex vertices are lattice points");
    let one = EquivClassK::one(&g);
    let factors: Vec<EquivClassK> = (0..g.len())
        .map(|q| {
            let shift = LaurentPoly::exp(&-&psi_weight(&g, q).expect("lattice vertex"));
            one.sub(&l.scale(&shift))
        })
        .collect();
    let basis: Vec<EquivClassK> = (0..g.len())
        .map(|p| factors[..p].iter().fold(one.clone(), |acc, f| acc.mul(f)))
        .collect();
    if basis != icanonical_basis_k(&g)? {
        return Err(ClassError::VerificationFailure(
            "prequantization powers differ from the i-canonical basis".into(),
        ));
    }
    Ok((g, basis))
}
