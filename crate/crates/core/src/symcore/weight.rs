use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An integer lattice vector: an isotropy weight, an edge label, or an exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Weight(Vec<BigInt>);

impl Weight {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Weight(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(alloc::vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i] = BigInt::one();
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Splits `self = g * u` with `u` primitive and `g > 0`.
    pub fn primitive_part(&self) -> Option<(BigInt, Weight)> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        Some((g.clone(), Weight(self.0.iter().map(|c| c / &g).collect())))
    }

    /// True when the first nonzero coordinate is positive.
    pub fn is_canonical(&self) -> bool {
        self.0
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(Signed::is_positive)
    }

    pub fn dot(&self, v: &[BigInt]) -> BigInt {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, v: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .zip(v)
            .map(|(a, b)| b * a)
            .fold(BigRational::zero(), |s, t| s + t)
    }

    pub fn scale(&self, k: &BigInt) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().cloned().map(BigRational::from_integer).collect()
    }

    /// Appends `extra` zero coordinates.
    pub fn extend(&self, extra: usize) -> Weight {
        let mut c = self.0.clone();
        c.extend(core::iter::repeat_n(BigInt::zero(), extra));
        Weight(c)
    }

    pub fn truncate(&self, rank: usize) -> Weight {
        Weight(self.0[..rank].to_vec())
    }

    /// Primitive integer direction of a nonzero rational vector and the
    /// positive scalar `m` with `v = m * direction`.
    pub fn primitive_direction(v: &[BigRational]) -> Option<(Weight, BigRational)> {
        let lcm = v
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = v.iter().map(|c| (c * &lcm).to_integer()).collect();
        let (g, u) = Weight(ints).primitive_part()?;
        Some((u, BigRational::new(g, lcm)))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_part_extracts_gcd() {
        let (g, u) = Weight::from_i64s(&[4, -6]).primitive_part().unwrap();
        assert_eq!(g, BigInt::from(2));
        assert_eq!(u, Weight::from_i64s(&[2, -3]));
        assert!(Weight::zero(3).primitive_part().is_none());
    }

    #[test]
    fn canonical_sign() {
        assert!(Weight::from_i64s(&[0, 1, -1]).is_canonical());
        assert!(!Weight::from_i64s(&[0, -1, 1]).is_canonical());
        assert!(!Weight::zero(2).is_canonical());
    }

    #[test]
    fn rational_direction() {
        let v = [
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        ];
        let (u, m) = Weight::primitive_direction(&v).unwrap();
        assert_eq!(u, Weight::from_i64s(&[2, -3]));
        assert_eq!(m, BigRational::new(1.into(), 4.into()));
    }
}
