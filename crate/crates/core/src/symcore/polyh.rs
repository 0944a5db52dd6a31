use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{inverse, to_rational_rows, BasisCoordinates};
use super::weight::Weight;
use super::ArithError;

/// An element of ℚ[x₁, …, x_k] ⊃ H*_T(pt; ℤ): multidegree ↦ coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyH {
    rank: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl PolyH {
    pub fn zero(rank: usize) -> Self {
        PolyH {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(BigRational::one(), rank)
    }

    pub fn constant(c: BigRational, rank: usize) -> Self {
        Self::monomial(c, alloc::vec![0; rank])
    }

    pub fn monomial(c: BigRational, degrees: Vec<u32>) -> Self {
        let mut p = Self::zero(degrees.len());
        p.add_term(degrees, c);
        p
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut d = alloc::vec![0; rank];
        d[i] = 1;
        Self::monomial(BigRational::one(), d)
    }

    /// The linear form `Σ cᵢ·xᵢ`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let rank = coeffs.len();
        let mut p = Self::zero(rank);
        for (i, c) in coeffs.iter().enumerate() {
            let mut d = alloc::vec![0; rank];
            d[i] = 1;
            p.add_term(d, c.clone());
        }
        p
    }

    pub fn from_weight(w: &Weight) -> Self {
        Self::linear(&w.to_rational())
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigRational)>>(rank: usize, terms: I) -> Self {
        let mut p = Self::zero(rank);
        for (d, c) in terms {
            assert_eq!(d.len(), rank, "multidegree rank mismatch");
            p.add_term(d, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, degrees: &[u32]) -> BigRational {
        self.terms.get(degrees).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, d: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(d).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
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
        for (d, c) in &other.terms {
            r.add_term(d.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_rank(other)?;
        let mut r = self.clone();
        for (d, c) in &other.terms {
            r.add_term(d.clone(), -c);
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_rank(other)?;
        let mut r = Self::zero(self.rank);
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let d = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                r.add_term(d, c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("polynomial rank mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("polynomial rank mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("polynomial rank mismatch")
    }

    pub fn neg(&self) -> Self {
        PolyH {
            rank: self.rank,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(d, c)| (d.clone(), c * k)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.rank), |acc, _| acc.mul(self))
    }

    /// Total degree of the leading homogeneous part; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|d| d.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|d| d.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(BigRational::is_integer)
    }

    /// The constant term, when the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.coeff(&alloc::vec![0; self.rank])),
            _ => None,
        }
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |s, (d, c)| {
            let m = d.iter().zip(point).fold(BigRational::one(), |m, (&k, x)| {
                m * num_traits::pow(x.clone(), k as usize)
            });
            s + c * m
        })
    }

    /// Ring homomorphism `xᵢ ↦ imagesᵢ`.
    pub fn substitute(&self, images: &[PolyH]) -> Self {
        assert_eq!(images.len(), self.rank, "substitution arity mismatch");
        let out_rank = images.first().map_or(0, PolyH::rank);
        let mut r = Self::zero(out_rank);
        for (d, c) in &self.terms {
            let mut m = Self::constant(c.clone(), out_rank);
            for (img, &k) in images.iter().zip(d) {
                if k > 0 {
                    m = m.mul(&img.pow(k));
                }
            }
            r = r.add(&m);
        }
        r
    }

    /// The ring homomorphism determined on linear forms by `basisᵢ ↦ imagesᵢ`.
    pub fn substitute_linear(&self, basis: &[Weight], images: &[Weight]) -> Result<Self, ArithError> {
        BasisCoordinates::new(basis)?;
        if basis.len() != self.rank || images.len() != basis.len() {
            return Err(ArithError::RankMismatch {
                left: self.rank,
                right: basis.len(),
            });
        }
        // x = B⁻¹·(basis forms), so xₖ ↦ Σᵢ (B⁻¹)ₖᵢ·imagesᵢ
        let inv = inverse(&to_rational_rows(basis)).ok_or(ArithError::NotUnimodular)?;
        let out_rank = images.first().map_or(0, Weight::rank);
        let img_forms: Vec<PolyH> = inv
            .iter()
            .map(|row| {
                let mut v = alloc::vec![BigRational::zero(); out_rank];
                for (a, img) in row.iter().zip(images) {
                    for (slot, c) in v.iter_mut().zip(img.coords()) {
                        *slot += a * c;
                    }
                }
                PolyH::linear(&v)
            })
            .collect();
        Ok(self.substitute(&img_forms))
    }

    /// Exact division by the linear form with coefficient vector `form`.
    pub fn divide_by_linear(&self, form: &[BigRational]) -> Result<Self, ArithError> {
        if form.len() != self.rank {
            return Err(ArithError::RankMismatch {
                left: self.rank,
                right: form.len(),
            });
        }
        let j = form.iter().position(|c| !c.is_zero()).ok_or(ArithError::ZeroWeight)?;
        let lead = form[j].clone();
        let divisor = PolyH::linear(form);
        // Lex order with x_j first: the leading monomial of the divisor is x_j.
        let key = |d: &Vec<u32>| {
            let mut k = alloc::vec![d[j]];
            k.extend(d.iter().copied());
            k
        };
        let mut rem = self.clone();
        let mut q = Self::zero(self.rank);
        while let Some((d, c)) = rem.terms.iter().max_by_key(|(d, _)| key(d)) {
            if d[j] == 0 {
                return Err(ArithError::NotDivisible);
            }
            let mut qd = d.clone();
            qd[j] -= 1;
            let t = PolyH::monomial(c / &lead, qd);
            rem = rem.sub(&t.mul(&divisor));
            q = q.add(&t);
        }
        Ok(q)
    }

    pub fn divide_by_linear_form(&self, w: &Weight) -> Result<Self, ArithError> {
        self.divide_by_linear(&w.to_rational())
    }

    pub fn extend_rank(&self, extra: usize) -> Self {
        Self::from_terms(
            self.rank + extra,
            self.terms.iter().map(|(d, c)| {
                let mut d = d.clone();
                d.extend(core::iter::repeat_n(0, extra));
                (d, c.clone())
            }),
        )
    }

    /// Sets the last variable to zero and drops it.
    pub fn drop_last_variable(&self) -> Self {
        let r = self.rank - 1;
        Self::from_terms(
            r,
            self.terms
                .iter()
                .filter(|(d, _)| d[r] == 0)
                .map(|(d, c)| (d[..r].to_vec(), c.clone())),
        )
    }

    /// Common denominator of all coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        let cs: Vec<BigRational> = self.terms.values().cloned().collect();
        super::linalg::denominator_lcm(&cs)
    }
}

impl fmt::Display for PolyH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest lex multidegree first reads naturally: x1^2 + x1*x2 + x2^2.
        for (i, (d, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<(usize, u32)> = d
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (i, k))
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            for (n, (v, k)) in vars.iter().enumerate() {
                if n > 0 {
                    f.write_str("*")?;
                }
                write!(f, "x{}", v + 1)?;
                if *k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}
