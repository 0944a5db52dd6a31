//! The invariant matrix behind `gkm verify`.

use std::fmt::Write as _;

use gkm_core::cohomology::{self as coh, abbv_index, gt_class, theta, EquivClassH};
use gkm_core::equivariant::{
    euler_minus, expand_in_basis, global_index, is_kirwan_class, local_index, poincare_dual, require_gkm,
    structure_constants, ClassError, EquivClass,
};
use gkm_core::gkm::{Direction, GkmGraph};
use gkm_core::kirwan::{self, KirwanError};
use gkm_core::ktheory::{self as kt, EquivClassK};
use gkm_core::symcore::linalg::is_unimodular;
use gkm_core::symcore::{LaurentPoly, LocalRing, Mode as RingMode, PolyH, Weight};
use num_traits::{One, Signed};
use serde_json::json;

use crate::cli::{Report, VerifyLevel};
use crate::format::{self, Class};
use crate::properties::{self, Sample, Subject};
use crate::registry::{self, Loaded};
use crate::{CliError, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

type Check = Result<Option<String>, String>;

fn row(name: impl Into<String>, check: Check) -> Row {
    let (status, detail) = match check {
        Ok(None) => (Status::Pass, String::new()),
        Ok(Some(reason)) => (Status::Skip, reason),
        Err(msg) => (Status::Fail, msg),
    };
    Row { name: name.into(), status, detail }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn id(g: &GkmGraph, p: usize) -> &str {
    &g.vertex(p).id
}

fn delzant(g: &GkmGraph) -> Check {
    for p in 0..g.len() {
        let ws: Vec<Weight> = g.isotropy(p).into_iter().map(|(_, w)| w).collect();
        ensure(ws.len() == g.rank() && is_unimodular(&ws), || {
            format!("weights at {} are not a Z-basis", id(g, p))
        })?;
    }
    Ok(None)
}

fn orientation(g: &GkmGraph) -> Check {
    for e in g.edges() {
        let (s, d) = (g.vertex(e.src), g.vertex(e.dst));
        let diff = g.psi_difference(e.src, e.dst);
        let scaled = e.weight.to_rational().into_iter().map(|c| c * &e.multiplicity);
        ensure(
            s.mu < d.mu
                && e.weight.dot(g.xi()).is_positive()
                && e.weight.is_primitive()
                && e.multiplicity.is_positive()
                && scaled.eq(diff),
            || format!("edge {} -> {} is badly oriented or labelled", s.id, d.id),
        )?;
    }
    Ok(None)
}

fn extremes(g: &GkmGraph) -> Check {
    let n = g.rank();
    for v in g.vertices() {
        ensure(v.wplus.len() == v.lambda && v.wplus.len() + v.wminus.len() == n, || {
            format!("weight counts at {} do not match lambda", v.id)
        })?;
    }
    let count = |l: usize| g.vertices().iter().filter(|v| v.lambda == l).count();
    ensure(count(0) == 1 && count(n) == 1, || {
        format!("{} minima and {} maxima", count(0), count(n))
    })?;
    Ok(None)
}

fn flow_faces(g: &GkmGraph) -> Check {
    let ii = g.is_index_increasing();
    ensure(g.flow_face(0, Direction::Up).len() == g.len(), || {
        "the flow-up face of the minimum is not everything".into()
    })?;
    for p in 0..g.len() {
        let face = g.flow_face(p, Direction::Up);
        let closure = g.upward_closure(p);
        ensure(face.iter().all(|q| closure.contains(q)), || {
            format!("F({}) is not inside V+({})", id(g, p), id(g, p))
        })?;
        if ii {
            ensure(face.len() == closure.len(), || format!("F({0}) != V+({0})", id(g, p)))?;
            ensure(face.iter().all(|&q| q == p || g.lambda(q) > g.lambda(p)), || {
                format!("F({}) has a vertex of index <= lambda", id(g, p))
            })?;
        }
        if g.lambda(p) == 0 {
            ensure(g.flow_face(p, Direction::Down).len() == 1, || {
                format!("H({}) is not a point", id(g, p))
            })?;
        }
    }
    Ok(None)
}

fn reversal(loaded: &Loaded) -> Check {
    let g = &loaded.graph;
    let mut input = loaded.input.clone();
    input.xi = Some(g.xi().iter().map(|c| -c).collect());
    let r = GkmGraph::from_input(&input).map_err(|e| e.to_string())?;
    for v in g.vertices() {
        let p = r.index_of(&v.id).expect("same vertices");
        ensure(r.lambda(p) == g.rank() - v.lambda, || {
            format!("reversing xi does not send lambda to n - lambda at {}", v.id)
        })?;
    }
    Ok(None)
}

fn text<E: ToString>(e: E) -> String {
    e.to_string()
}

fn eta_checks<R: Sample>(g: &GkmGraph) -> Check {
    for p in 0..g.len() {
        let eta: EquivClass<R> = poincare_dual(g, p);
        require_gkm(g, &eta).map_err(text)?;
        ensure(is_kirwan_class(g, &eta, p) && *eta.value(p) == euler_minus::<R>(g, p), || {
            format!("eta({}) is not a Kirwan class", id(g, p))
        })?;
    }
    Ok(None)
}

fn basis_checks<R: Sample>(g: &GkmGraph) -> Check {
    let taus = R::basis(g).map_err(text)?;
    for (p, t) in taus.iter().enumerate() {
        require_gkm(g, t).map_err(text)?;
        ensure(is_kirwan_class(g, t, p), || format!("tau({}) is not a Kirwan class", id(g, p)))?;
        let closure = g.upward_closure(p);
        ensure(t.support().iter().all(|q| closure.contains(q)), || {
            format!("tau({}) is supported outside V+", id(g, p))
        })?;
        // K-theory: 1 on the flow-up face; cohomology: 1 at p only
        let face = g.flow_face(p, Direction::Up);
        for q in 0..g.len() {
            let hit = match <R as LocalRing>::MODE {
                RingMode::K => face.contains(&q),
                RingMode::H => q == p,
            };
            let want = if hit { R::one(g.rank()) } else { R::zero(g.rank()) };
            ensure(local_index(g, t, q).map_err(text)? == want, || {
                format!("Ind_{}(tau({})) is wrong", id(g, q), id(g, p))
            })?;
        }
    }
    ensure(taus[0] == EquivClass::one(g), || "tau at the minimum is not 1".into())?;
    Ok(None)
}

fn triangular<R: Sample>(g: &GkmGraph) -> Check {
    let etas: Vec<EquivClass<R>> = (0..g.len()).map(|p| poincare_dual(g, p)).collect();
    for (p, t) in R::basis(g).map_err(text)?.iter().enumerate() {
        let c = expand_in_basis(g, &etas, t).map_err(text)?;
        ensure(c[p] == R::one(g.rank()) && c[..p].iter().all(LocalRing::is_zero), || {
            format!("row {} of eta -> tau is not unitriangular", id(g, p))
        })?;
    }
    Ok(None)
}

fn index_of_one<R: Sample>(g: &GkmGraph) -> Check {
    let one = EquivClass::<R>::one(g);
    for q in 0..g.len() {
        let want = match <R as LocalRing>::MODE {
            RingMode::H if g.lambda(q) > 0 => R::zero(g.rank()),
            _ => R::one(g.rank()),
        };
        ensure(local_index(g, &one, q).map_err(text)? == want, || {
            format!("Ind_{}(1) is {}", id(g, q), want.as_text())
        })?;
    }
    let global = global_index(g, &one).map_err(text)?;
    let want = match <R as LocalRing>::MODE {
        RingMode::K => R::one(g.rank()),
        RingMode::H => R::zero(g.rank()),
    };
    ensure(global == want, || format!("global index of 1 is {}", global.as_text()))?;
    Ok(None)
}

fn index_quotient<R: Sample>(g: &GkmGraph) -> Check {
    let f = R::one(g.rank()).add(&R::one(g.rank()));
    for q in 0..g.len() {
        let c = poincare_dual::<R>(g, q).scale(&f);
        ensure(local_index(g, &c, q).map_err(text)? == f, || {
            format!("Ind_{0}(f eta({0})) != f", id(g, q))
        })?;
    }
    Ok(None)
}

fn structure<R: Sample>(g: &GkmGraph) -> Check {
    let taus = R::basis(g).map_err(text)?;
    let table = structure_constants(g, &taus).map_err(text)?;
    for p in 0..g.len() {
        for q in p..g.len() {
            let via = (0..g.len()).fold(EquivClass::zero(g), |acc, r| match table.get(p, q, r) {
                Some(c) => acc.add(&taus[r].scale(c)),
                None => acc,
            });
            ensure(via == taus[p].mul(&taus[q]), || {
                format!("structure constants fail on ({}, {})", id(g, p), id(g, q))
            })?;
        }
    }
    Ok(None)
}

fn as_linearity(g: &GkmGraph) -> Check {
    let f = LaurentPoly::exp(&Weight::unit(g.rank(), 0));
    for t in kt::icanonical_basis_k(g).map_err(text)? {
        let lhs = kt::atiyah_segal_index(g, &t.scale(&f)).map_err(text)?;
        let rhs = f.mul(&kt::atiyah_segal_index(g, &t).map_err(text)?);
        ensure(lhs == rhs, || "Ind(f c) != f Ind(c)".into())?;
    }
    Ok(None)
}

fn prequantization(loaded: &Loaded) -> Check {
    let Some(n) = loaded.fixture.as_deref().and_then(simplex_dimension) else {
        return Ok(Some("not a projective space fixture".into()));
    };
    let (g, classes) = kt::cpn_prequantization_basis(n).map_err(text)?;
    ensure(classes == kt::icanonical_basis_k(&g).map_err(text)?, || {
        "product-formula classes differ from the basis".into()
    })?;
    Ok(None)
}

fn simplex_dimension(name: &str) -> Option<usize> {
    match name {
        "cp1" => Some(1),
        "cp2" => Some(2),
        _ => name.strip_prefix("cpn:")?.parse().ok(),
    }
}

fn theta_one(g: &GkmGraph) -> Check {
    for e in g.canonical_edges() {
        let t = theta(g, e).map_err(text)?;
        ensure(t.is_one(), || {
            format!("theta = {t} on {} -> {}", id(g, e.src), id(g, e.dst))
        })?;
    }
    Ok(None)
}

fn gt_equalities(g: &GkmGraph) -> Check {
    if !g.is_index_increasing() {
        return match gt_class(g, 0) {
            Err(ClassError::NotIndexIncreasing { .. }) => Ok(Some("not index increasing: no GT classes".into())),
            other => Err(format!("expected NotIndexIncreasing, got {other:?}")),
        };
    }
    let taus = coh::icanonical_basis_h(g).map_err(text)?;
    for (p, tau) in taus.iter().enumerate() {
        let zeta = gt_class(g, p).map_err(text)?;
        let eta: EquivClassH = poincare_dual(g, p);
        ensure(zeta == eta && eta == *tau, || format!("eta, zeta and tau differ at {}", id(g, p)))?;
        let closure = g.upward_closure(p);
        ensure(zeta.support() == closure, || format!("zeta({}) is not supported on V+", id(g, p)))?;
        ensure(eta.value(p).degree() == Some(g.lambda(p) as u32), || {
            format!("deg eta({}) != lambda", id(g, p))
        })?;
    }
    Ok(None)
}

fn abbv_linearity(g: &GkmGraph) -> Check {
    let x = PolyH::from_weight(&Weight::unit(g.rank(), 0));
    for p in 0..g.len() {
        let eta: EquivClassH = poincare_dual(g, p);
        let lhs = abbv_index(g, &eta.scale(&x)).map_err(text)?;
        let rhs = x.mul(&abbv_index(g, &eta).map_err(text)?);
        ensure(lhs == rhs, || "ABBV index is not linear".into())?;
    }
    Ok(None)
}

fn kirwan_maps(g: &GkmGraph) -> Check {
    // the first circle among ξ, (1,…,1), ±eₖ that reduces freely
    let n = g.rank();
    let mut circles = vec![g.xi().to_vec(), vec![1.into(); n]];
    for k in 0..n {
        for s in [1, -1] {
            circles.push(Weight::unit(n, k).scale(&s.into()).into_coords());
        }
    }
    let mut found = None;
    for pi in &circles {
        match kirwan::reduced_fixed_data(g, pi) {
            Ok(s) => {
                found = Some(s);
                break;
            }
            Err(KirwanError::NotFreeAction { .. } | KirwanError::NonUniqueMaximum) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    let Some(setup) = found else {
        return Ok(Some("no candidate circle reduces freely".into()));
    };
    for p in 0..g.len() {
        let eta: EquivClassH = poincare_dual(g, p);
        let eta_k: EquivClassK = poincare_dual(g, p);
        for pt in &setup.reduced {
            let a = kirwan::kirwan_restrict(g, &setup, &eta, pt).map_err(text)?;
            let b = kirwan::kirwan_restrict_from_source(g, &setup, &eta, pt).map_err(text)?;
            ensure(a == b, || format!("kappa(eta({})) depends on the vertex used", id(g, p)))?;
            ensure(kirwan::project_h(&a, &pt.edge_weight, &setup.pi) == a, || {
                "kappa leaves the residual span".into()
            })?;
            let ka = kirwan::project_k(eta_k.value(setup.top), &pt.edge_weight, &setup.pi);
            let kb = kirwan::project_k(eta_k.value(pt.source), &pt.edge_weight, &setup.pi);
            ensure(ka.is_some() && ka == kb, || {
                format!("K-theoretic kappa(eta({})) depends on the vertex used", id(g, p))
            })?;
        }
    }
    Ok(None)
}

/// Emit, re-read, re-validate and re-emit a basis; the bytes must agree.
pub fn round_trip(g: &GkmGraph, mode: Mode, basis: &[Class]) -> Result<(), CliError> {
    let first = serde_json::to_string_pretty(&format::basis_to_json(g, mode, basis)).expect("serializes");
    let parsed: serde_json::Value = serde_json::from_str(&first).map_err(|e| CliError::Format(e.to_string()))?;
    let (m, again) = format::basis_from_json(&parsed, g)?;
    match m {
        Mode::KTheory => kt::verify_icanonical_k(g, &crate::cli::unwrap_k(&again))?,
        Mode::Cohomology => coh::verify_icanonical_h(g, &crate::cli::unwrap_h(&again))?,
    }
    let second = serde_json::to_string_pretty(&format::basis_to_json(g, m, &again)).expect("serializes");
    if first != second {
        return Err(ClassError::VerificationFailure("round trip changed the basis file".into()).into());
    }
    Ok(())
}

fn permuted(loaded: &Loaded, mode: Mode) -> Check {
    let g = &loaded.graph;
    let basis = registry::compute_basis(g, mode).map_err(text)?;
    let mut input = loaded.input.clone();
    input.vertices.reverse();
    let r = GkmGraph::from_input(&input).map_err(text)?;
    let again = registry::compute_basis(&r, mode).map_err(text)?;
    for (p, v) in g.vertices().iter().enumerate() {
        let rp = r.index_of(&v.id).expect("same vertices");
        for (q, w) in g.vertices().iter().enumerate() {
            let rq = r.index_of(&w.id).expect("same vertices");
            ensure(basis[p].value(q) == again[rp].value(rq), || {
                format!("basis at ({}, {}) changed after reordering the input", v.id, w.id)
            })?;
        }
    }
    Ok(None)
}

/// Runs the matrix at `level`. `Fast` covers every deterministic invariant;
/// `Full` adds the file round trip, input permutation and the randomized
/// suites.
pub fn run(loaded: &Loaded, level: VerifyLevel) -> Vec<Row> {
    let g = &loaded.graph;
    if level == VerifyLevel::None {
        return Vec::new();
    }
    let mut rows = vec![
        row("gkm.delzant", delzant(g)),
        row("gkm.orientation", orientation(g)),
        row("gkm.extremes", extremes(g)),
        row("gkm.flow_faces", flow_faces(g)),
        row("gkm.reversal", reversal(loaded)),
        row("ktheory.eta", eta_checks::<LaurentPoly>(g)),
        row("ktheory.basis", basis_checks::<LaurentPoly>(g)),
        row("ktheory.triangular", triangular::<LaurentPoly>(g)),
        row("ktheory.index_of_one", index_of_one::<LaurentPoly>(g)),
        row("ktheory.index_quotient", index_quotient::<LaurentPoly>(g)),
        row("ktheory.structure", structure::<LaurentPoly>(g)),
        row("ktheory.global_linearity", as_linearity(g)),
        row("ktheory.prequantization", prequantization(loaded)),
        row("cohomology.eta", eta_checks::<PolyH>(g)),
        row("cohomology.basis", basis_checks::<PolyH>(g)),
        row("cohomology.triangular", triangular::<PolyH>(g)),
        row("cohomology.index_of_one", index_of_one::<PolyH>(g)),
        row("cohomology.index_quotient", index_quotient::<PolyH>(g)),
        row("cohomology.structure", structure::<PolyH>(g)),
        row("cohomology.global_linearity", abbv_linearity(g)),
        row("cohomology.theta", theta_one(g)),
        row("cohomology.gt", gt_equalities(g)),
        row("kirwan.restriction", kirwan_maps(g)),
    ];
    if level == VerifyLevel::Full {
        for mode in [Mode::KTheory, Mode::Cohomology] {
            let rt = registry::compute_basis(g, mode)
                .and_then(|b| round_trip(g, mode, &b))
                .map(|()| None)
                .map_err(text);
            rows.push(row(format!("cli.round_trip.{}", mode.name()), rt));
            rows.push(row(format!("{}.permutation", mode.name()), permuted(loaded, mode)));
        }
        let subject = Subject {
            name: loaded.fixture.clone().unwrap_or_else(|| "input".into()),
            input: loaded.input.clone(),
            graph: g.clone(),
        };
        for r in properties::run_all(std::slice::from_ref(&subject), 0x5eed, 40) {
            let check = match r.failure {
                None => Ok(None),
                Some(msg) => Err(msg),
            };
            rows.push(row(format!("random.{} ({} cases)", r.name, r.cases), check));
        }
    }
    rows
}

pub fn report(rows: &[Row]) -> Report {
    let mut text = String::new();
    for r in rows {
        let _ = write!(text, "{}  {}", r.status.label(), r.name);
        if !r.detail.is_empty() {
            let _ = write!(text, "  ({})", r.detail);
        }
        text.push('\n');
    }
    let json = json!({
        "checks": rows
            .iter()
            .map(|r| json!({ "name": r.name, "status": r.status.label(), "detail": r.detail }))
            .collect::<Vec<_>>(),
    });
    Report { json, text, failure: None }
}
