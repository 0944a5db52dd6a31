use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{unimodular_completion, BasisCoordinates};
use super::weight::Weight;
use super::ArithError;

/// An element of R(T) = ℤ[e^{±x₁}, …, e^{±x_k}]: exponent vector ↦ coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Weight, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(BigInt::one(), Weight::zero(rank))
    }

    pub fn constant(c: BigInt, rank: usize) -> Self {
        Self::monomial(c, Weight::zero(rank))
    }

    pub fn monomial(coeff: BigInt, exp: Weight) -> Self {
        let mut p = Self::zero(exp.rank());
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    /// `e^w`.
    pub fn exp(w: &Weight) -> Self {
        Self::monomial(BigInt::one(), w.clone())
    }

    /// `1 − e^w`.
    pub fn one_minus_exp(w: &Weight) -> Self {
        Self::one(w.rank()).sub(&Self::exp(w))
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, BigInt)>>(rank: usize, terms: I) -> Self {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            assert_eq!(e.rank(), rank, "exponent rank mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.rank)
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &Weight) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, exp: Weight, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<(), ArithError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(ArithError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_rank(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_rank(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c);
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_rank(other)?;
        let mut r = Self::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(r)
    }

    /// Panicking form of [`try_add`](Self::try_add) for same-rank operands.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("Laurent rank mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("Laurent rank mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("Laurent rank mismatch")
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn shift(&self, w: &Weight) -> Self {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e + w, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.rank), |acc, _| acc.mul(self))
    }

    /// Applies an additive map to every exponent.
    pub fn map_exponents<F: Fn(&Weight) -> Weight>(&self, out_rank: usize, f: F) -> Self {
        Self::from_terms(out_rank, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// `e^{v} ↦ e^{Σ aᵢ·imagesᵢ}` where `v = Σ aᵢ·basisᵢ`.
    pub fn substitute_linear(&self, basis: &[Weight], images: &[Weight]) -> Result<Self, ArithError> {
        let coords = BasisCoordinates::new(basis)?;
        if basis.len() != self.rank || images.len() != basis.len() {
            return Err(ArithError::RankMismatch {
                left: self.rank,
                right: basis.len(),
            });
        }
        let out_rank = images.first().map_or(0, Weight::rank);
        Ok(self.map_exponents(out_rank, |v| {
            let a = coords.coordinates(v);
            images
                .iter()
                .zip(&a)
                .fold(Weight::zero(out_rank), |s, (img, ai)| &s + &img.scale(ai))
        }))
    }

    /// `q` with `self = (1 − e^w)·q`.
    pub fn divide_by_cyclotomic(&self, w: &Weight) -> Result<Self, ArithError> {
        if w.rank() != self.rank {
            return Err(ArithError::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        let u = unimodular_completion(w)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let g = &u.gcd;
        // Chains of exponents differing by multiples of g·e₁ in the new coordinates.
        let mut chains: BTreeMap<(Vec<BigInt>, BigInt), BTreeMap<BigInt, BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = u.apply(e).into_coords();
            let key = (v[1..].to_vec(), v[0].mod_floor(g));
            chains.entry(key).or_default().insert(v[0].clone(), c.clone());
        }
        let mut q = Self::zero(self.rank);
        for ((rest, _), chain) in chains {
            // f = q·(1 − X^g)  ⇔  q_e = Σ_{e' ≤ e, e' ≡ e} f_{e'}
            let lo = chain.keys().next().unwrap().clone();
            let hi = chain.keys().next_back().unwrap().clone();
            let mut running = BigInt::zero();
            let mut e = lo;
            while e <= hi {
                if let Some(c) = chain.get(&e) {
                    running += c;
                }
                if e < hi && !running.is_zero() {
                    let mut coords = Vec::with_capacity(self.rank);
                    coords.push(e.clone());
                    coords.extend(rest.iter().cloned());
                    q.add_term(u.apply_inverse(&Weight::new(coords)), running.clone());
                }
                e += g;
            }
            if !running.is_zero() {
                return Err(ArithError::NotDivisible);
            }
        }
        Ok(q)
    }

    /// Exact quotient by `(1 − e^{w₁})⋯(1 − e^{w_m})`.
    pub fn divide_by_cyclotomics<'a, I: IntoIterator<Item = &'a Weight>>(
        &self,
        ws: I,
    ) -> Result<Self, ArithError> {
        ws.into_iter()
            .try_fold(self.clone(), |p, w| p.divide_by_cyclotomic(w))
    }

    /// Appends `extra` exponent coordinates, all zero.
    pub fn extend_rank(&self, extra: usize) -> Self {
        self.map_exponents(self.rank + extra, |e| e.extend(extra))
    }

    /// Sets `e^{x_k} ↦ 1` for the last coordinate and drops it.
    pub fn drop_last_coordinate(&self) -> Self {
        let r = self.rank - 1;
        self.map_exponents(r, |e| e.truncate(r))
    }

    pub fn max_abs_exponent(&self) -> BigInt {
        self.terms
            .keys()
            .flat_map(|e| e.coords().iter().map(Signed::abs))
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e.is_zero() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "e{e}")?;
            } else {
                write!(f, "{a}*e{e}")?;
            }
        }
        Ok(())
    }
}
