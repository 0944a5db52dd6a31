use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::laurent::LaurentPoly;
use super::polyh::PolyH;
use super::weight::Weight;
use super::ArithError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Factor `w` stands for `1 − e^w`.
    K,
    /// Factor `w` stands for the linear form `w`.
    H,
}

/// Coefficient rings for restriction tables: R(T) (mode K) or H*_T(pt) (mode H).
///
/// Both carry the same localization machinery; they differ in what a weight
/// factor means and how lattice substitutions act.
pub trait LocalRing: Clone + PartialEq + Debug {
    const MODE: Mode;

    fn zero(rank: usize) -> Self;
    fn one(rank: usize) -> Self;
    fn rank(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// The ring element a denominator factor `w` stands for.
    fn factor(w: &Weight) -> Self;

    /// `(m, c)` with `c` canonical and `1/factor(w) = m/factor(c)`.
    fn normalize_factor(w: &Weight) -> Result<(Self, Weight), ArithError>;

    /// Exact quotient by `factor(w)`.
    fn divide_by_factor(&self, w: &Weight) -> Result<Self, ArithError>;

    fn substitute_linear(&self, basis: &[Weight], images: &[Weight]) -> Result<Self, ArithError>;

    fn extend_rank(&self, extra: usize) -> Self;

    /// Kills the last lattice coordinate (`e^{w₀} ↦ 1`, resp. `w₀ ↦ 0`) and drops it.
    fn drop_last(&self) -> Self;

    fn product<'a, I: IntoIterator<Item = &'a Weight>>(rank: usize, ws: I) -> Self {
        ws.into_iter()
            .fold(Self::one(rank), |acc, w| acc.mul(&Self::factor(w)))
    }
}

impl LocalRing for LaurentPoly {
    const MODE: Mode = Mode::K;

    fn zero(rank: usize) -> Self {
        LaurentPoly::zero(rank)
    }
    fn one(rank: usize) -> Self {
        LaurentPoly::one(rank)
    }
    fn rank(&self) -> usize {
        LaurentPoly::rank(self)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn factor(w: &Weight) -> Self {
        LaurentPoly::one_minus_exp(w)
    }
    fn normalize_factor(w: &Weight) -> Result<(Self, Weight), ArithError> {
        if w.is_zero() {
            return Err(ArithError::ZeroWeight);
        }
        if w.is_canonical() {
            Ok((LaurentPoly::one(w.rank()), w.clone()))
        } else {
            // 1/(1 − e^{w}) = −e^{−w}/(1 − e^{−w})
            let c = -w;
            Ok((LaurentPoly::monomial(-BigInt::one(), c.clone()), c))
        }
    }
    fn divide_by_factor(&self, w: &Weight) -> Result<Self, ArithError> {
        self.divide_by_cyclotomic(w)
    }
    fn substitute_linear(&self, basis: &[Weight], images: &[Weight]) -> Result<Self, ArithError> {
        LaurentPoly::substitute_linear(self, basis, images)
    }
    fn extend_rank(&self, extra: usize) -> Self {
        LaurentPoly::extend_rank(self, extra)
    }
    fn drop_last(&self) -> Self {
        self.drop_last_coordinate()
    }
}

impl LocalRing for PolyH {
    const MODE: Mode = Mode::H;

    fn zero(rank: usize) -> Self {
        PolyH::zero(rank)
    }
    fn one(rank: usize) -> Self {
        PolyH::one(rank)
    }
    fn rank(&self) -> usize {
        PolyH::rank(self)
    }
    fn is_zero(&self) -> bool {
        PolyH::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        PolyH::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PolyH::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        PolyH::mul(self, other)
    }
    fn factor(w: &Weight) -> Self {
        PolyH::from_weight(w)
    }
    fn normalize_factor(w: &Weight) -> Result<(Self, Weight), ArithError> {
        // 1/w = (1/(±g))·1/u with u primitive and canonical
        let (g, u) = w.primitive_part().ok_or(ArithError::ZeroWeight)?;
        let (s, c) = if u.is_canonical() { (g, u) } else { (-g, -&u) };
        Ok((PolyH::constant(BigRational::new(BigInt::one(), s), w.rank()), c))
    }
    fn divide_by_factor(&self, w: &Weight) -> Result<Self, ArithError> {
        self.divide_by_linear_form(w)
    }
    fn substitute_linear(&self, basis: &[Weight], images: &[Weight]) -> Result<Self, ArithError> {
        PolyH::substitute_linear(self, basis, images)
    }
    fn extend_rank(&self, extra: usize) -> Self {
        PolyH::extend_rank(self, extra)
    }
    fn drop_last(&self) -> Self {
        self.drop_last_variable()
    }
}

/// A formal sum of fractions `numerator / ∏ factor(w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedSum<R> {
    rank: usize,
    terms: Vec<(R, Vec<Weight>)>,
}

/// Outcome of [`LocalizedSum::reduce`].
#[derive(Clone, Debug, PartialEq)]
pub enum Reduced<R> {
    Polynomial(R),
    Irreducible { numerator: R, denominator: Vec<Weight> },
}

impl<R> Reduced<R> {
    pub fn polynomial(self) -> Option<R> {
        match self {
            Reduced::Polynomial(p) => Some(p),
            Reduced::Irreducible { .. } => None,
        }
    }
}

impl<R: LocalRing> LocalizedSum<R> {
    pub fn new(rank: usize) -> Self {
        LocalizedSum {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        R::MODE
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(R, Vec<Weight>)] {
        &self.terms
    }

    pub fn push(&mut self, numerator: R, denominator: Vec<Weight>) -> Result<(), ArithError> {
        if numerator.rank() != self.rank {
            return Err(ArithError::RankMismatch {
                left: self.rank,
                right: numerator.rank(),
            });
        }
        if let Some(w) = denominator.iter().find(|w| w.rank() != self.rank) {
            return Err(ArithError::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        if denominator.iter().any(Weight::is_zero) {
            return Err(ArithError::ZeroWeight);
        }
        self.terms.push((numerator, denominator));
        Ok(())
    }

    pub fn with_term(mut self, numerator: R, denominator: Vec<Weight>) -> Result<Self, ArithError> {
        self.push(numerator, denominator)?;
        Ok(self)
    }

    /// Brings every term over the least common denominator, sums, and cancels
    /// denominator factors one at a time.
    pub fn reduce(&self) -> Result<Reduced<R>, ArithError> {
        let mut normalized = Vec::with_capacity(self.terms.len());
        let mut lcd: BTreeMap<Weight, usize> = BTreeMap::new();
        for (num, den) in &self.terms {
            let mut num = num.clone();
            let mut counts: BTreeMap<Weight, usize> = BTreeMap::new();
            for w in den {
                let (m, c) = R::normalize_factor(w)?;
                num = num.mul(&m);
                *counts.entry(c).or_default() += 1;
            }
            for (c, k) in &counts {
                let slot = lcd.entry(c.clone()).or_default();
                *slot = (*slot).max(*k);
            }
            normalized.push((num, counts));
        }

        let mut total = R::zero(self.rank);
        for (num, counts) in normalized {
            let mut scaled = num;
            for (c, &k) in &lcd {
                let have = counts.get(c).copied().unwrap_or(0);
                for _ in have..k {
                    scaled = scaled.mul(&R::factor(c));
                }
            }
            total = total.add(&scaled);
        }

        let mut remaining = lcd;
        if total.is_zero() {
            return Ok(Reduced::Polynomial(total));
        }
        loop {
            let mut progress = false;
            for (c, k) in remaining.iter_mut() {
                while *k > 0 {
                    match total.divide_by_factor(c) {
                        Ok(q) => {
                            total = q;
                            *k -= 1;
                            progress = true;
                        }
                        Err(ArithError::NotDivisible) => break,
                        Err(e) => return Err(e),
                    }
                }
            }
            remaining.retain(|_, k| *k > 0);
            if remaining.is_empty() {
                return Ok(Reduced::Polynomial(total));
            }
            if !progress {
                let denominator = remaining
                    .into_iter()
                    .flat_map(|(c, k)| core::iter::repeat_n(c, k))
                    .collect();
                return Ok(Reduced::Irreducible {
                    numerator: total,
                    denominator,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_i64s(c)
    }

    #[test]
    fn cp1_index_of_one() {
        let s = LocalizedSum::new(1)
            .with_term(LaurentPoly::one(1), alloc::vec![w(&[-1])])
            .unwrap()
            .with_term(LaurentPoly::one(1), alloc::vec![w(&[1])])
            .unwrap();
        assert_eq!(s.mode(), Mode::K);
        assert_eq!(s.reduce().unwrap(), Reduced::Polynomial(LaurentPoly::one(1)));
    }

    #[test]
    fn cp2_abbv_of_one_vanishes() {
        let one = PolyH::one(2);
        let s = LocalizedSum::new(2)
            .with_term(one.clone(), alloc::vec![w(&[-1, 0]), w(&[-1, 1])])
            .unwrap()
            .with_term(one.clone(), alloc::vec![w(&[0, -1]), w(&[1, -1])])
            .unwrap()
            .with_term(one, alloc::vec![w(&[1, 0]), w(&[0, 1])])
            .unwrap();
        assert_eq!(s.reduce().unwrap(), Reduced::Polynomial(PolyH::zero(2)));
    }

    #[test]
    fn empty_denominator_returns_numerator() {
        let p = LaurentPoly::one_minus_exp(&w(&[2, 1]));
        let s = LocalizedSum::new(2).with_term(p.clone(), alloc::vec![]).unwrap();
        assert_eq!(s.reduce().unwrap(), Reduced::Polynomial(p));
    }

    #[test]
    fn irreducible_fraction_is_reported() {
        let s = LocalizedSum::new(1)
            .with_term(LaurentPoly::one(1), alloc::vec![w(&[1])])
            .unwrap();
        match s.reduce().unwrap() {
            Reduced::Irreducible { denominator, .. } => assert_eq!(denominator, alloc::vec![w(&[1])]),
            r => panic!("expected irreducible, got {r:?}"),
        }
    }

    #[test]
    fn non_primitive_linear_factor() {
        // x/(2x) = 1/2
        let s = LocalizedSum::new(1)
            .with_term(PolyH::var(1, 0), alloc::vec![w(&[-2])])
            .unwrap();
        let half = PolyH::constant(BigRational::new((-1).into(), 2.into()), 1);
        assert_eq!(s.reduce().unwrap(), Reduced::Polynomial(half));
    }

    #[test]
    fn rejects_mismatched_rank_and_zero_factor() {
        let mut s = LocalizedSum::<PolyH>::new(2);
        assert_eq!(s.push(PolyH::one(1), alloc::vec![]), Err(ArithError::RankMismatch { left: 2, right: 1 }));
        assert_eq!(s.push(PolyH::one(2), alloc::vec![w(&[0, 0])]), Err(ArithError::ZeroWeight));
    }
}
