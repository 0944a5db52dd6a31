//! Small exact linear algebra over ℤ and ℚ.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::weight::Weight;
use super::ArithError;

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn to_rational_rows(rows: &[Weight]) -> QMatrix {
    rows.iter().map(Weight::to_rational).collect()
}

/// Row-reduces `m` in place and returns the pivot columns.
fn row_reduce(m: &mut QMatrix) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..ncols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &QMatrix) -> usize {
    let mut m = rows.clone();
    row_reduce(&mut m).len()
}

pub fn in_span(rows: &QMatrix, v: &[BigRational]) -> bool {
    let mut with = rows.clone();
    with.push(v.to_vec());
    rank(&with) == rank(rows)
}

pub fn det(rows: &[Weight]) -> BigInt {
    let n = rows.len();
    let mut m = to_rational_rows(rows);
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        d *= &m[col][col];
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    d.to_integer()
}

pub fn is_unimodular(rows: &[Weight]) -> bool {
    let n = rows.len();
    rows.iter().all(|r| r.rank() == n) && det(rows).abs().is_one()
}

pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let mut aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &QMatrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigRational::zero(), |s, (a, b)| s + a * b)
        })
        .collect()
}

/// A spanning vector of the kernel `{c : rows · c = 0}` when it is one-dimensional.
pub fn kernel_line(rows: &QMatrix, ncols: usize) -> Option<Vec<BigRational>> {
    let mut m = rows.clone();
    let pivots = row_reduce(&mut m);
    if pivots.len() + 1 != ncols {
        return None;
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = alloc::vec![BigRational::zero(); ncols];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// Integer coordinates `a` with `Σ aᵢ·basisᵢ = v`, for a unimodular basis.
#[derive(Clone, Debug)]
pub struct BasisCoordinates {
    inverse_transpose: QMatrix,
}

impl BasisCoordinates {
    pub fn new(basis: &[Weight]) -> Result<Self, ArithError> {
        if !is_unimodular(basis) {
            return Err(ArithError::NotUnimodular);
        }
        let n = basis.len();
        let transpose: QMatrix = (0..n)
            .map(|i| {
                basis
                    .iter()
                    .map(|b| BigRational::from_integer(b.coords()[i].clone()))
                    .collect()
            })
            .collect();
        let inverse_transpose = inverse(&transpose).ok_or(ArithError::NotUnimodular)?;
        Ok(BasisCoordinates { inverse_transpose })
    }

    pub fn coordinates(&self, v: &Weight) -> Vec<BigInt> {
        mat_vec(&self.inverse_transpose, &v.to_rational())
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "unimodular basis produced fractional coordinates");
                c.to_integer()
            })
            .collect()
    }
}

/// `U` with `|det U| = 1` and `U·u = e₁`, where `w = g·u` and `u` is primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularCompletion {
    pub matrix: Vec<Vec<BigInt>>,
    pub inverse: Vec<Vec<BigInt>>,
    pub gcd: BigInt,
}

impl UnimodularCompletion {
    pub fn apply(&self, v: &Weight) -> Weight {
        Weight::new(self.matrix.iter().map(|row| dot(row, v.coords())).collect())
    }

    pub fn apply_inverse(&self, v: &Weight) -> Weight {
        Weight::new(self.inverse.iter().map(|row| dot(row, v.coords())).collect())
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(k: usize) -> Vec<Vec<BigInt>> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Extended Euclid on the coordinates of `w`, recording the row operations in
/// `U` and their inverses (as column operations) in `U⁻¹`.
pub fn unimodular_completion(w: &Weight) -> Result<UnimodularCompletion, ArithError> {
    let (gcd, u) = w.primitive_part().ok_or(ArithError::ZeroWeight)?;
    let k = u.rank();
    let mut v: Vec<BigInt> = u.into_coords();
    let mut m = identity(k);
    let mut inv = identity(k);

    loop {
        let nonzero: Vec<usize> = (0..k).filter(|&i| !v[i].is_zero()).collect();
        let &piv = nonzero
            .iter()
            .min_by(|&&a, &&b| v[a].abs().cmp(&v[b].abs()).then(a.cmp(&b)))
            .expect("primitive vector is nonzero");
        if nonzero.len() == 1 {
            if piv != 0 {
                v.swap(0, piv);
                m.swap(0, piv);
                for row in inv.iter_mut() {
                    row.swap(0, piv);
                }
            }
            if v[0].is_negative() {
                v[0] = -v[0].clone();
                for c in m[0].iter_mut() {
                    *c = -c.clone();
                }
                for row in inv.iter_mut() {
                    row[0] = -row[0].clone();
                }
            }
            break;
        }
        for &i in &nonzero {
            if i == piv {
                continue;
            }
            // row_i -= q * row_piv; inverse: col_piv += q * col_i
            let q = v[i].div_floor(&v[piv]);
            v[i] = &v[i] - &q * &v[piv];
            let src = m[piv].clone();
            for (c, s) in m[i].iter_mut().zip(&src) {
                *c -= &q * s;
            }
            for row in inv.iter_mut() {
                let add = &q * &row[i];
                row[piv] += add;
            }
        }
    }
    debug_assert!(v[0].is_one());
    Ok(UnimodularCompletion {
        matrix: m,
        inverse: inv,
        gcd,
    })
}

/// Least common multiple of the denominators of `v`.
pub fn denominator_lcm(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_i64s(c)
    }

    #[test]
    fn completion_of_basis_vector_is_identity() {
        let u = unimodular_completion(&w(&[1, 0])).unwrap();
        assert_eq!(u.matrix, identity(2));
        assert_eq!(u.gcd, BigInt::one());
        let u = unimodular_completion(&w(&[2, 0])).unwrap();
        assert_eq!(u.matrix, identity(2));
        assert_eq!(u.gcd, BigInt::from(2));
    }

    #[test]
    fn completion_of_two_three() {
        let u = unimodular_completion(&w(&[2, 3])).unwrap();
        assert_eq!(u.gcd, BigInt::one());
        assert_eq!(u.apply(&w(&[2, 3])), w(&[1, 0]));
        let rows: Vec<Weight> = u.matrix.iter().cloned().map(Weight::new).collect();
        assert!(is_unimodular(&rows));
        assert_eq!(u.apply_inverse(&w(&[1, 0])), w(&[2, 3]));
        assert_eq!(u.apply_inverse(&u.apply(&w(&[-5, 7]))), w(&[-5, 7]));
    }

    #[test]
    fn completion_rejects_zero() {
        assert_eq!(unimodular_completion(&w(&[0, 0])), Err(ArithError::ZeroWeight));
    }

    #[test]
    fn determinant_and_coordinates() {
        assert_eq!(det(&[w(&[0, 1]), w(&[1, -1])]), BigInt::from(-1));
        assert_eq!(det(&[w(&[2, 0]), w(&[0, 3])]), BigInt::from(6));
        let b = BasisCoordinates::new(&[w(&[0, 1]), w(&[1, -1])]).unwrap();
        // (0,1) = 1·y + 0·(x−y); (1,0) = 1·y + 1·(x−y)
        assert_eq!(b.coordinates(&w(&[0, 1])), alloc::vec![1.into(), 0.into()]);
        assert_eq!(b.coordinates(&w(&[1, 0])), alloc::vec![1.into(), 1.into()]);
        assert!(BasisCoordinates::new(&[w(&[2, 0]), w(&[0, 1])]).is_err());
    }

    #[test]
    fn kernel_of_hyperplane() {
        let rows = alloc::vec![w(&[1, 1, 0]).to_rational(), w(&[0, 1, 1]).to_rational()];
        let k = kernel_line(&rows, 3).unwrap();
        assert!(mat_vec(&rows, &k).iter().all(Zero::is_zero));
        assert!(!k.iter().all(Zero::is_zero));
    }
}
