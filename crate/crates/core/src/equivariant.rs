//! Fixed-point restriction tables over a GKM graph, generic in the
//! coefficient ring: R(T) for K-theory, H*_T(pt) for cohomology.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::gkm::{Direction, GkmGraph};
use crate::symcore::{ArithError, LocalRing, LocalizedSum, Reduced, Weight};

/// An assignment of a ring element to every fixed point, indexed in ≺ order.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivClass<R> {
    values: Vec<R>,
}

impl<R: LocalRing> EquivClass<R> {
    pub fn new(values: Vec<R>) -> Self {
        EquivClass { values }
    }

    pub fn zero(g: &GkmGraph) -> Self {
        Self::constant(g, R::zero(g.rank()))
    }

    pub fn one(g: &GkmGraph) -> Self {
        Self::constant(g, R::one(g.rank()))
    }

    pub fn constant(g: &GkmGraph, r: R) -> Self {
        EquivClass {
            values: alloc::vec![r; g.len()],
        }
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn into_values(self) -> Vec<R> {
        self.values
    }

    pub fn value(&self, p: usize) -> &R {
        &self.values[p]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(R::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&p| !self.values[p].is_zero()).collect()
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.len(), other.len(), "classes over different graphs");
        EquivClass {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, R::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, R::sub)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, R::mul)
    }

    /// Multiplication by an element of the base ring.
    pub fn scale(&self, f: &R) -> Self {
        EquivClass {
            values: self.values.iter().map(|v| v.mul(f)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassError {
    Arith(ArithError),
    ShapeMismatch(String),
    NotGkm { src: String, dst: String },
    NonPolynomialIndex { vertex: Option<String> },
    DivisionFailure { vertex: String },
    VerificationFailure(String),
    NotIndexIncreasing { src: String, dst: String },
    NotECanEdge { src: String, dst: String },
    NonConstantQuotient { src: String, dst: String },
    IntegralityFailure { vertex: String },
}

impl From<ArithError> for ClassError {
    fn from(e: ArithError) -> Self {
        ClassError::Arith(e)
    }
}

impl fmt::Display for ClassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassError::Arith(e) => write!(f, "arithmetic error: {e}"),
            ClassError::ShapeMismatch(m) => write!(f, "class does not fit the graph: {m}"),
            ClassError::NotGkm { src, dst } => {
                write!(f, "GKM condition fails on edge {src} -> {dst}")
            }
            ClassError::NonPolynomialIndex { vertex: None } => {
                f.write_str("global index does not reduce to a polynomial")
            }
            ClassError::NonPolynomialIndex { vertex: Some(v) } => {
                write!(f, "local index at {v} does not reduce to a polynomial")
            }
            ClassError::DivisionFailure { vertex } => {
                write!(f, "triangular elimination failed at {vertex}")
            }
            ClassError::VerificationFailure(m) => write!(f, "verification failed: {m}"),
            ClassError::NotIndexIncreasing { src, dst } => {
                write!(f, "graph is not index increasing (edge {src} -> {dst})")
            }
            ClassError::NotECanEdge { src, dst } => {
                write!(f, "edge {src} -> {dst} does not raise the index by one")
            }
            ClassError::NonConstantQuotient { src, dst } => {
                write!(f, "theta quotient on edge {src} -> {dst} is not a constant")
            }
            ClassError::IntegralityFailure { vertex } => {
                write!(f, "non-integral restriction at {vertex}")
            }
        }
    }
}

impl core::error::Error for ClassError {}

pub(crate) fn id(g: &GkmGraph, p: usize) -> String {
    g.vertex(p).id.clone()
}

/// Checks that `c` has one value of the graph's rank per vertex.
pub fn check_shape<R: LocalRing>(g: &GkmGraph, c: &EquivClass<R>) -> Result<(), ClassError> {
    if c.len() != g.len() {
        return Err(ClassError::ShapeMismatch(alloc::format!(
            "{} values for {} vertices",
            c.len(),
            g.len()
        )));
    }
    if let Some(v) = c.values().iter().find(|v| v.rank() != g.rank()) {
        return Err(ClassError::ShapeMismatch(alloc::format!(
            "value of rank {} in a rank {} graph",
            v.rank(),
            g.rank()
        )));
    }
    Ok(())
}

/// `∏_{w ∈ W⁺(p)} factor(w)`: the negative Euler class at `p`.
pub fn euler_minus<R: LocalRing>(g: &GkmGraph, p: usize) -> R {
    R::product(g.rank(), g.wplus(p))
}

/// A GKM edge condition that fails.
#[derive(Clone, Debug, PartialEq)]
pub struct GkmViolation<R> {
    pub src: usize,
    pub dst: usize,
    /// `c(src) − c(dst)`, not divisible by the edge factor.
    pub difference: R,
}

/// Divisibility of `c(p) − c(q)` by the edge factor on every oriented edge.
pub fn check_gkm<R: LocalRing>(g: &GkmGraph, c: &EquivClass<R>) -> Result<(), GkmViolation<R>> {
    for e in g.edges() {
        let d = c.value(e.src).sub(c.value(e.dst));
        if d.divide_by_factor(&e.weight).is_err() {
            return Err(GkmViolation {
                src: e.src,
                dst: e.dst,
                difference: d,
            });
        }
    }
    Ok(())
}

/// [`check_shape`] and [`check_gkm`], as a [`ClassError`].
pub fn require_gkm<R: LocalRing>(g: &GkmGraph, c: &EquivClass<R>) -> Result<(), ClassError> {
    check_shape(g, c)?;
    check_gkm(g, c).map_err(|v| ClassError::NotGkm {
        src: id(g, v.src),
        dst: id(g, v.dst),
    })
}

/// η_p: the Euler class of the normal bundle of the flow-up face, extended by zero.
pub fn poincare_dual<R: LocalRing>(g: &GkmGraph, p: usize) -> EquivClass<R> {
    let face = g.flow_face(p, Direction::Up);
    let values = (0..g.len())
        .map(|q| {
            if !face.contains(&q) {
                return R::zero(g.rank());
            }
            let normal: Vec<Weight> = g
                .isotropy(q)
                .into_iter()
                .filter(|(r, _)| !face.contains(r))
                .map(|(_, w)| w)
                .collect();
            R::product(g.rank(), &normal)
        })
        .collect();
    EquivClass::new(values)
}

/// `c(p)` is the negative Euler class and `c` vanishes strictly below `p`.
pub fn is_kirwan_class<R: LocalRing>(g: &GkmGraph, c: &EquivClass<R>, p: usize) -> bool {
    c.len() == g.len()
        && *c.value(p) == euler_minus::<R>(g, p)
        && (0..p).all(|q| c.value(q).is_zero())
}

/// Localization formula: `Σ_p c(p) / ∏_{w ∈ W_p} factor(w)` with `W_p` the
/// isotropy weights at `p`.
pub fn global_index<R: LocalRing>(g: &GkmGraph, c: &EquivClass<R>) -> Result<R, ClassError> {
    check_shape(g, c)?;
    let mut sum = LocalizedSum::new(g.rank());
    for p in 0..g.len() {
        if c.value(p).is_zero() {
            continue;
        }
        let ws = g.isotropy(p).into_iter().map(|(_, w)| w).collect();
        sum.push(c.value(p).clone(), ws)?;
    }
    match sum.reduce()? {
        Reduced::Polynomial(r) => Ok(r),
        Reduced::Irreducible { .. } => Err(ClassError::NonPolynomialIndex { vertex: None }),
    }
}

/// Intermediate data of a local index computation. Lattice coordinates are
/// the original ones followed by `w₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalIndexTrace<R> {
    /// `(w₁,…,w_λ)` = W⁺(q), then the remaining isotropy weights at `q`.
    pub basis: Vec<Weight>,
    /// `f₀, f₁, …, f_λ`.
    pub f: Vec<R>,
    /// Localization weights at the fixed points `p₀, …, p_λ` of CP^λ.
    pub denominators: Vec<Vec<Weight>>,
    pub index: R,
}

/// The local index of `c` at `q`, with its intermediate data.
pub fn local_index_trace<R: LocalRing>(
    g: &GkmGraph,
    c: &EquivClass<R>,
    q: usize,
) -> Result<LocalIndexTrace<R>, ClassError> {
    require_gkm(g, c)?;
    let n = g.rank();
    let lambda = g.lambda(q);
    let basis: Vec<Weight> = g.wplus(q).iter().chain(g.wminus(q)).cloned().collect();
    let lifted: Vec<Weight> = basis.iter().map(|w| w.extend(1)).collect();
    let w0 = Weight::unit(n + 1, n);

    let mut images = Vec::with_capacity(lambda + 1);
    let mut denominators = Vec::with_capacity(lambda + 1);
    images.push(
        lifted
            .iter()
            .enumerate()
            .map(|(i, w)| if i < lambda { w + &w0 } else { w.clone() })
            .collect::<Vec<_>>(),
    );
    denominators.push(lifted[..lambda].iter().map(|w| &w0 + w).collect::<Vec<_>>());
    for j in 0..lambda {
        images.push(
            lifted
                .iter()
                .enumerate()
                .map(|(i, w)| if i < lambda { w - &lifted[j] } else { w.clone() })
                .collect(),
        );
        let mut den = alloc::vec![-&(&lifted[j] + &w0)];
        den.extend((0..lambda).filter(|&t| t != j).map(|t| &lifted[t] - &lifted[j]));
        denominators.push(den);
    }

    let value = c.value(q);
    let mut f = Vec::with_capacity(lambda + 1);
    let mut sum = LocalizedSum::new(n + 1);
    for (img, den) in images.iter().zip(&denominators) {
        let fj = value.substitute_linear(&basis, img)?;
        sum.push(fj.clone(), den.clone())?;
        f.push(fj);
    }
    let index = match sum.reduce()? {
        Reduced::Polynomial(r) => r.drop_last(),
        Reduced::Irreducible { .. } => {
            return Err(ClassError::NonPolynomialIndex {
                vertex: Some(id(g, q)),
            })
        }
    };
    Ok(LocalIndexTrace {
        basis,
        f,
        denominators,
        index,
    })
}

pub fn local_index<R: LocalRing>(g: &GkmGraph, c: &EquivClass<R>, q: usize) -> Result<R, ClassError> {
    Ok(local_index_trace(g, c, q)?.index)
}

/// Coefficients `f_p` with `c = Σ f_p·basis_p`, by triangular elimination in ≺ order.
pub fn expand_in_basis<R: LocalRing>(
    g: &GkmGraph,
    basis: &[EquivClass<R>],
    c: &EquivClass<R>,
) -> Result<Vec<R>, ClassError> {
    check_shape(g, c)?;
    if basis.len() != g.len() {
        return Err(ClassError::ShapeMismatch(alloc::format!(
            "basis has {} classes for {} vertices",
            basis.len(),
            g.len()
        )));
    }
    let mut residual = c.clone();
    let mut coeffs = alloc::vec![R::zero(g.rank()); g.len()];
    for r in 0..g.len() {
        if residual.value(r).is_zero() {
            continue;
        }
        if !is_kirwan_class(g, &basis[r], r) {
            return Err(ClassError::DivisionFailure { vertex: id(g, r) });
        }
        let mut f = residual.value(r).clone();
        for w in g.wplus(r) {
            f = f
                .divide_by_factor(w)
                .map_err(|_| ClassError::DivisionFailure { vertex: id(g, r) })?;
        }
        residual = residual.sub(&basis[r].scale(&f));
        coeffs[r] = f;
    }
    debug_assert!(residual.is_zero());
    Ok(coeffs)
}

/// `τ_p·τ_q = Σ_r c_{pq}^r·τ_r`, stored for `p ≤ q` with nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<R> {
    pub table: BTreeMap<(usize, usize, usize), R>,
}

impl<R: LocalRing> StructureConstants<R> {
    pub fn get(&self, p: usize, q: usize, r: usize) -> Option<&R> {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        self.table.get(&(a, b, r))
    }
}

pub fn structure_constants<R: LocalRing>(
    g: &GkmGraph,
    basis: &[EquivClass<R>],
) -> Result<StructureConstants<R>, ClassError> {
    let mut table = BTreeMap::new();
    for p in 0..basis.len() {
        for q in p..basis.len() {
            let prod = basis[p].mul(&basis[q]);
            for (r, c) in expand_in_basis(g, basis, &prod)?.into_iter().enumerate() {
                if !c.is_zero() {
                    table.insert((p, q, r), c);
                }
            }
        }
    }
    Ok(StructureConstants { table })
}
