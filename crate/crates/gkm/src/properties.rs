//! Seeded randomized property suites over a set of graphs.
//!
//! Each suite draws its cases from a ChaCha stream and stops at the first
//! counterexample, reporting it.

use std::collections::BTreeMap;

use gkm_core::cohomology::{icanonical_basis_h, EquivClassH};
use gkm_core::equivariant::{
    expand_in_basis, local_index, poincare_dual, require_gkm, structure_constants, EquivClass,
    StructureConstants,
};
use gkm_core::gkm::{GkmGraph, ToricInput};
use gkm_core::ktheory::{icanonical_basis_k, EquivClassK};
use gkm_core::symcore::{LaurentPoly, LocalRing, LocalizedSum, PolyH, Reduced, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Mode};

/// A graph with the data needed to rebuild it.
#[derive(Clone, Debug)]
pub struct Subject {
    pub name: String,
    pub input: ToricInput,
    pub graph: GkmGraph,
}

impl Subject {
    pub fn new(name: &str, input: ToricInput) -> Result<Self, CliError> {
        let graph = GkmGraph::from_input(&input)?;
        Ok(Subject { name: name.to_string(), input, graph })
    }

    pub fn fixture(name: &str) -> Self {
        let input = gkm_core::fixtures::by_name(name).expect("known fixture");
        Self::new(name, input).expect("fixtures are valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// The operations the suites need beyond [`LocalRing`].
pub trait Sample: LocalRing {
    fn random(rng: &mut ChaCha8Rng, rank: usize) -> Self;
    fn basis(g: &GkmGraph) -> Result<Vec<EquivClass<Self>>, CliError>;
    /// `c(q) / e⁻(q)`, when it is a polynomial.
    fn divide_by_euler(&self, ws: &[Weight]) -> Option<Self>;
    fn as_text(&self) -> String;
}

impl Sample for LaurentPoly {
    fn random(rng: &mut ChaCha8Rng, rank: usize) -> Self {
        let n = rng.gen_range(0..=2);
        LaurentPoly::from_terms(
            rank,
            (0..n).map(|_| {
                let e: Vec<i64> = (0..rank).map(|_| rng.gen_range(-1..=1)).collect();
                (Weight::from_i64s(&e), BigInt::from(rng.gen_range(-3..=3)))
            }),
        )
    }

    fn basis(g: &GkmGraph) -> Result<Vec<EquivClassK>, CliError> {
        Ok(icanonical_basis_k(g)?)
    }

    fn divide_by_euler(&self, ws: &[Weight]) -> Option<Self> {
        self.divide_by_cyclotomics(ws).ok()
    }

    fn as_text(&self) -> String {
        self.to_string()
    }
}

impl Sample for PolyH {
    fn random(rng: &mut ChaCha8Rng, rank: usize) -> Self {
        let c: Vec<BigRational> = (0..rank)
            .map(|_| BigRational::from_integer(rng.gen_range(-2..=2).into()))
            .collect();
        let k = BigRational::from_integer(rng.gen_range(-3..=3).into());
        match rng.gen_range(0..3) {
            0 => PolyH::constant(k, rank),
            1 => PolyH::linear(&c).add(&PolyH::constant(k, rank)),
            _ => PolyH::linear(&c).mul(&PolyH::linear(&c)),
        }
    }

    fn basis(g: &GkmGraph) -> Result<Vec<EquivClassH>, CliError> {
        Ok(icanonical_basis_h(g)?)
    }

    fn divide_by_euler(&self, ws: &[Weight]) -> Option<Self> {
        ws.iter().try_fold(self.clone(), |p, w| p.divide_by_linear_form(w).ok())
    }

    fn as_text(&self) -> String {
        self.to_string()
    }
}

/// Per-graph data computed once per suite run.
struct Prepared<R> {
    subject: Subject,
    etas: Vec<EquivClass<R>>,
    taus: Vec<EquivClass<R>>,
}

fn prepare<R: Sample>(subjects: &[Subject]) -> Result<Vec<Prepared<R>>, String> {
    subjects
        .iter()
        .map(|s| {
            let g = &s.graph;
            Ok(Prepared {
                subject: s.clone(),
                etas: (0..g.len()).map(|p| poincare_dual(g, p)).collect(),
                taus: R::basis(g).map_err(|e| format!("{}: {e}", s.name))?,
            })
        })
        .collect()
}

/// `Σ f_p·basis_p` with random coefficients on a random subset.
fn random_combination<R: Sample>(rng: &mut ChaCha8Rng, g: &GkmGraph, basis: &[EquivClass<R>]) -> EquivClass<R> {
    let mut c = EquivClass::zero(g);
    for b in basis {
        if rng.gen_bool(0.6) {
            c = c.add(&b.scale(&R::random(rng, g.rank())));
        }
    }
    c
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("nonempty")
}

fn fail(name: &'static str, cases: usize, msg: String) -> SuiteResult {
    SuiteResult { name, cases, failure: Some(msg) }
}

fn both<F>(name: &'static str, cases: usize, mut f: F) -> SuiteResult
where
    F: FnMut(Mode, usize) -> Result<usize, String>,
{
    let k = cases.div_ceil(2);
    let mut done = 0;
    for (mode, n) in [(Mode::KTheory, k), (Mode::Cohomology, cases - k)] {
        match f(mode, n) {
            Ok(c) => done += c,
            Err(msg) => return fail(name, done, msg),
        }
    }
    SuiteResult { name, cases: done, failure: None }
}

fn additivity_for<R: Sample>(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let prepared = prepare::<R>(subjects)?;
    for _ in 0..cases {
        let pr = pick(rng, &prepared);
        let g = &pr.subject.graph;
        let a = random_combination(rng, g, &pr.etas);
        let b = random_combination(rng, g, &pr.taus);
        let q = rng.gen_range(0..g.len());
        let ind = |c: &EquivClass<R>| local_index(g, c, q).map_err(|e| format!("{}: {e}", pr.subject.name));
        let lhs = ind(&a.add(&b))?;
        let rhs = ind(&a)?.add(&ind(&b)?);
        if lhs != rhs {
            return Err(format!(
                "{} at {}: Ind(a+b) = {} but Ind(a)+Ind(b) = {}",
                pr.subject.name,
                g.vertex(q).id,
                lhs.as_text(),
                rhs.as_text()
            ));
        }
        // perturbing by a class vanishing at q leaves the index alone
        let vanishing: Vec<&EquivClass<R>> = pr.etas.iter().filter(|e| e.value(q).is_zero()).collect();
        if let Some(&t) = vanishing.choose(rng) {
            let f = R::random(rng, g.rank());
            let moved = ind(&a.add(&t.scale(&f)))?;
            if moved != ind(&a)? {
                return Err(format!("{} at {}: perturbation changed the index", pr.subject.name, g.vertex(q).id));
            }
        }
    }
    Ok(cases)
}

/// Ind_q(a + b) = Ind_q(a) + Ind_q(b), and Ind_q(a + f·t) = Ind_q(a) when t(q) = 0.
pub fn local_index_additivity(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    both("local-index additivity", cases, |mode, n| match mode {
        Mode::KTheory => additivity_for::<LaurentPoly>(subjects, rng, n),
        Mode::Cohomology => additivity_for::<PolyH>(subjects, rng, n),
    })
}

fn quotient_for<R: Sample>(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let prepared = prepare::<R>(subjects)?;
    let mut hits = 0;
    let mut attempts = 0;
    while hits < cases {
        attempts += 1;
        if attempts > 50 * cases {
            return Err(format!("only {hits} divisible cases in {attempts} draws"));
        }
        let pr = pick(rng, &prepared);
        let g = &pr.subject.graph;
        let q = rng.gen_range(0..g.len());
        let mut c = pr.etas[q].scale(&R::random(rng, g.rank()));
        if rng.gen_bool(0.5) {
            c = c.add(&random_combination(rng, g, &pr.etas));
        }
        let Some(f) = c.value(q).divide_by_euler(g.wplus(q)) else {
            continue;
        };
        hits += 1;
        let ind = local_index(g, &c, q).map_err(|e| format!("{}: {e}", pr.subject.name))?;
        if ind != f {
            return Err(format!(
                "{} at {}: Ind = {} but c(q)/e(q) = {}",
                pr.subject.name,
                g.vertex(q).id,
                ind.as_text(),
                f.as_text()
            ));
        }
    }
    Ok(hits)
}

/// Ind_q(c) = c(q)/e⁻(q) whenever the quotient is a polynomial.
pub fn index_quotient(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    both("Ind_q = c(q)/e(q) when divisible", cases, |mode, n| match mode {
        Mode::KTheory => quotient_for::<LaurentPoly>(subjects, rng, n),
        Mode::Cohomology => quotient_for::<PolyH>(subjects, rng, n),
    })
}

/// A random generic direction for `s`, or `None` after a few misses.
fn random_xi(rng: &mut ChaCha8Rng, s: &Subject) -> Option<GkmGraph> {
    for _ in 0..20 {
        let xi: Vec<BigInt> = (0..s.graph.rank()).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect();
        let mut input = s.input.clone();
        input.xi = Some(xi);
        if let Ok(g) = GkmGraph::from_input(&input) {
            return Some(g);
        }
    }
    None
}

fn emitted_for<R: Sample>(g: &GkmGraph, rng: &mut ChaCha8Rng, name: &str) -> Result<(), String> {
    let etas: Vec<EquivClass<R>> = (0..g.len()).map(|p| poincare_dual(g, p)).collect();
    let taus = R::basis(g).map_err(|e| format!("{name}: {e}"))?;
    let mixed = random_combination(rng, g, &taus).mul(&random_combination(rng, g, &etas));
    for c in etas.iter().chain(&taus).chain([&mixed]) {
        require_gkm(g, c).map_err(|e| format!("{name}, xi {:?}: {e}", g.xi()))?;
    }
    Ok(())
}

/// Every class the library emits, under random generic directions, is GKM.
pub fn gkm_divisibility(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    const NAME: &str = "GKM divisibility of emitted classes";
    let mut done = 0;
    while done < cases {
        let s = pick(rng, subjects);
        let Some(g) = random_xi(rng, s) else { continue };
        let checked = emitted_for::<LaurentPoly>(&g, rng, &s.name)
            .and_then(|()| emitted_for::<PolyH>(&g, rng, &s.name))
            .and_then(|()| {
                if !g.is_index_increasing() {
                    return Ok(());
                }
                (0..g.len()).try_for_each(|p| {
                    let z = gkm_core::cohomology::gt_class(&g, p).map_err(|e| format!("{}: {e}", s.name))?;
                    require_gkm(&g, &z).map_err(|e| format!("{}: {e}", s.name))
                })
            });
        if let Err(msg) = checked {
            return fail(NAME, done, msg);
        }
        done += 1;
    }
    SuiteResult { name: NAME, cases: done, failure: None }
}

fn triangular_for<R: Sample>(g: &GkmGraph, name: &str) -> Result<(), String> {
    let etas: Vec<EquivClass<R>> = (0..g.len()).map(|p| poincare_dual(g, p)).collect();
    let taus = R::basis(g).map_err(|e| format!("{name}: {e}"))?;
    for (p, tau) in taus.iter().enumerate() {
        let coeffs = expand_in_basis(g, &etas, tau).map_err(|e| format!("{name}: {e}"))?;
        for (r, c) in coeffs.iter().enumerate() {
            let ok = match r.cmp(&p) {
                core::cmp::Ordering::Less => c.is_zero(),
                core::cmp::Ordering::Equal => *c == R::one(g.rank()),
                core::cmp::Ordering::Greater => true,
            };
            if !ok {
                return Err(format!(
                    "{name}, xi {:?}: entry ({}, {}) is {}",
                    g.xi(),
                    g.vertex(p).id,
                    g.vertex(r).id,
                    c.as_text()
                ));
            }
        }
    }
    Ok(())
}

/// The matrix taking {η_p} to {τ_p} is lower unitriangular in ≺ order.
pub fn triangularity(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    const NAME: &str = "unitriangular eta -> tau";
    let mut done = 0;
    while done < cases {
        let s = pick(rng, subjects);
        let Some(g) = random_xi(rng, s) else { continue };
        let r = if done % 2 == 0 {
            triangular_for::<LaurentPoly>(&g, &s.name)
        } else {
            triangular_for::<PolyH>(&g, &s.name)
        };
        if let Err(msg) = r {
            return fail(NAME, done, msg);
        }
        done += 1;
    }
    SuiteResult { name: NAME, cases: done, failure: None }
}

fn by_id<R: Sample>(g: &GkmGraph, basis: &[EquivClass<R>]) -> BTreeMap<(String, String), R> {
    let mut m = BTreeMap::new();
    for (p, c) in basis.iter().enumerate() {
        for q in 0..g.len() {
            m.insert((g.vertex(p).id.clone(), g.vertex(q).id.clone()), c.value(q).clone());
        }
    }
    m
}

fn permuted_for<R: Sample>(s: &Subject, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let reference = by_id(&s.graph, &R::basis(&s.graph).map_err(|e| e.to_string())?);
    let mut input = s.input.clone();
    input.vertices.shuffle(rng);
    if let Some(edges) = input.edges.as_mut() {
        edges.shuffle(rng);
        for e in edges.iter_mut() {
            if rng.gen_bool(0.5) {
                *e = (e.1.clone(), e.0.clone());
            }
        }
    }
    let g = GkmGraph::from_input(&input).map_err(|e| format!("{}: {e}", s.name))?;
    let again = by_id(&g, &R::basis(&g).map_err(|e| e.to_string())?);
    if again != reference {
        return Err(format!("{}: basis changed after permuting the input", s.name));
    }
    Ok(())
}

/// Permuting the input vertex (and edge) lists does not change the basis.
pub fn permutation_uniqueness(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    both("uniqueness under input permutation", cases, |mode, n| {
        for _ in 0..n {
            let s = pick(rng, subjects);
            match mode {
                Mode::KTheory => permuted_for::<LaurentPoly>(s, rng)?,
                Mode::Cohomology => permuted_for::<PolyH>(s, rng)?,
            }
        }
        Ok(n)
    })
}

fn structure_for<R: Sample>(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let prepared = prepare::<R>(subjects)?;
    let tables: Vec<StructureConstants<R>> = prepared
        .iter()
        .map(|p| structure_constants(&p.subject.graph, &p.taus).map_err(|e| format!("{}: {e}", p.subject.name)))
        .collect::<Result<_, _>>()?;
    for _ in 0..cases {
        let i = rng.gen_range(0..prepared.len());
        let (pr, table) = (&prepared[i], &tables[i]);
        let g = &pr.subject.graph;
        let n = g.len();
        let f: Vec<R> = (0..n).map(|_| R::random(rng, g.rank())).collect();
        let h: Vec<R> = (0..n).map(|_| R::random(rng, g.rank())).collect();
        let combine = |coeffs: &[R]| {
            coeffs
                .iter()
                .zip(&pr.taus)
                .fold(EquivClass::zero(g), |acc, (c, t)| acc.add(&t.scale(c)))
        };
        let direct = combine(&f).mul(&combine(&h));
        let mut via = EquivClass::zero(g);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if let Some(c) = table.get(p, q, r) {
                        via = via.add(&pr.taus[r].scale(&f[p].mul(&h[q]).mul(c)));
                    }
                }
            }
        }
        if via != direct {
            return Err(format!("{}: expanded product differs from the pointwise product", pr.subject.name));
        }
    }
    Ok(cases)
}

/// Re-expanding with the structure constants reproduces pointwise products.
pub fn structure_products(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    both("structure constants vs products", cases, |mode, n| match mode {
        Mode::KTheory => structure_for::<LaurentPoly>(subjects, rng, n),
        Mode::Cohomology => structure_for::<PolyH>(subjects, rng, n),
    })
}

/// Independent evaluation of localized sums at a direction `ξ`.
pub trait Specialize: Sample {
    /// The value of `Σ nᵢ / ∏ factor(w)` at ξ, compared against
    /// `num / ∏ factor(den)` by cross-multiplication.
    fn agrees(terms: &[(Self, Vec<Weight>)], num: &Self, den: &[Weight], xi: &[BigInt]) -> bool;
}

fn dot(w: &Weight, xi: &[BigInt]) -> BigInt {
    w.dot(xi)
}

impl Specialize for LaurentPoly {
    fn agrees(terms: &[(Self, Vec<Weight>)], num: &Self, den: &[Weight], xi: &[BigInt]) -> bool {
        // e^w ↦ y^{⟨w,ξ⟩}, kept formal in y.
        let specialize = |p: &LaurentPoly| p.map_exponents(1, |v| Weight::new(vec![dot(v, xi)]));
        let factor = |ws: &[Weight]| {
            ws.iter().fold(LaurentPoly::one(1), |acc, w| {
                acc.mul(&LaurentPoly::one_minus_exp(&Weight::new(vec![dot(w, xi)])))
            })
        };
        let dens: Vec<LaurentPoly> = terms.iter().map(|(_, d)| factor(d)).collect();
        let all = dens.iter().fold(LaurentPoly::one(1), |a, d| a.mul(d));
        let d = factor(den);
        let mut lhs = LaurentPoly::zero(1);
        for (i, (n, _)) in terms.iter().enumerate() {
            let others = dens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(LaurentPoly::one(1), |a, (_, dj)| a.mul(dj));
            lhs = lhs.add(&specialize(n).mul(&others));
        }
        lhs.mul(&d) == specialize(num).mul(&all)
    }
}

impl Specialize for PolyH {
    fn agrees(terms: &[(Self, Vec<Weight>)], num: &Self, den: &[Weight], xi: &[BigInt]) -> bool {
        let point: Vec<BigRational> = xi.iter().cloned().map(BigRational::from_integer).collect();
        let prod = |ws: &[Weight]| {
            ws.iter()
                .fold(BigRational::one(), |a, w| a * BigRational::from_integer(dot(w, xi)))
        };
        let lhs = terms
            .iter()
            .fold(BigRational::zero(), |s, (n, d)| s + n.evaluate(&point) / prod(d));
        lhs == num.evaluate(&point) / prod(den)
    }
}

const POOL: [[i64; 2]; 8] = [[1, 0], [0, 1], [1, 1], [1, -1], [-1, 0], [0, -1], [2, 1], [1, 2]];

fn random_sum<R: Specialize>(rng: &mut ChaCha8Rng, prepared: &[Prepared<R>]) -> LocalizedSum<R> {
    if rng.gen_bool(0.5) {
        // a genuine global index: reduces to a polynomial
        let pr = pick(rng, prepared);
        let g = &pr.subject.graph;
        let c = random_combination(rng, g, &pr.etas);
        let mut s = LocalizedSum::new(g.rank());
        for p in 0..g.len() {
            let ws: Vec<Weight> = g.isotropy(p).into_iter().map(|(_, w)| w).collect();
            s.push(c.value(p).clone(), ws).expect("ranks agree");
        }
        s
    } else {
        let mut s = LocalizedSum::new(2);
        for _ in 0..rng.gen_range(1..=4) {
            let k = rng.gen_range(0..=3);
            let den: Vec<Weight> = (0..k).map(|_| Weight::from_i64s(pick(rng, &POOL))).collect();
            s.push(R::random(rng, 2), den).expect("ranks agree");
        }
        s
    }
}

fn reduce_for<R: Specialize>(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> Result<usize, String> {
    let prepared = prepare::<R>(subjects)?;
    let split = |r: Reduced<R>| match r {
        Reduced::Polynomial(p) => (p, Vec::new()),
        Reduced::Irreducible { numerator, denominator } => (numerator, denominator),
    };
    for _ in 0..cases {
        let sum = random_sum(rng, &prepared);
        let reduced = sum.reduce().map_err(|e| e.to_string())?;

        let mut terms = sum.terms().to_vec();
        terms.shuffle(rng);
        if let Some(i) = (!terms.is_empty()).then(|| rng.gen_range(0..terms.len())) {
            let part = R::random(rng, sum.rank());
            let (n, d) = terms[i].clone();
            terms[i] = (n.sub(&part), d.clone());
            terms.push((part, d));
        }
        let mut other = LocalizedSum::new(sum.rank());
        for (n, d) in &terms {
            other.push(n.clone(), d.clone()).expect("ranks agree");
        }
        let reordered = other.reduce().map_err(|e| e.to_string())?;
        if reordered != reduced {
            return Err(format!("{:?} sum: reduction depends on term order or splitting", <R as LocalRing>::MODE));
        }

        let (num, den) = split(reduced);
        let weights: Vec<&Weight> = sum.terms().iter().flat_map(|(_, d)| d).chain(&den).collect();
        let mut points = 0;
        let mut draws = 0;
        while points < 3 {
            draws += 1;
            if draws > 200 {
                return Err("no generic specialization point found".into());
            }
            let xi: Vec<BigInt> = (0..sum.rank()).map(|_| BigInt::from(rng.gen_range(-7..=7))).collect();
            if weights.iter().any(|w| dot(w, &xi).is_zero()) {
                continue;
            }
            points += 1;
            if !R::agrees(sum.terms(), &num, &den, &xi) {
                return Err(format!("{:?} sum disagrees with its reduction at xi = {xi:?}", <R as LocalRing>::MODE));
            }
        }
    }
    Ok(cases)
}

/// Reduction is independent of term order and splitting, and agrees with
/// three numeric specializations.
pub fn localized_reduce(subjects: &[Subject], rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    both("localized reduce: order invariance and specialization", cases, |mode, n| match mode {
        Mode::KTheory => reduce_for::<LaurentPoly>(subjects, rng, n),
        Mode::Cohomology => reduce_for::<PolyH>(subjects, rng, n),
    })
}

pub type Suite = fn(&[Subject], &mut ChaCha8Rng, usize) -> SuiteResult;

pub const SUITES: [Suite; 7] = [
    local_index_additivity,
    index_quotient,
    gkm_divisibility,
    triangularity,
    permutation_uniqueness,
    structure_products,
    localized_reduce,
];

/// Runs every suite, each from its own stream `seed + i`.
pub fn run_all(subjects: &[Subject], seed: u64, cases: usize) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, suite)| suite(subjects, &mut ChaCha8Rng::seed_from_u64(seed + i as u64), cases))
        .collect()
}
