use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RationalMatrix;
use crate::error::{Error, Result};

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    NegativeDefinite,
    NegativeSemidefinite,
    Indefinite,
    Zero,
}

impl Definiteness {
    /// The class of the negated matrix.
    pub fn mirror(self) -> Self {
        use Definiteness::*;
        match self {
            PositiveDefinite => NegativeDefinite,
            NegativeDefinite => PositiveDefinite,
            PositiveSemidefinite => NegativeSemidefinite,
            NegativeSemidefinite => PositiveSemidefinite,
            other => other,
        }
    }
}

impl From<Inertia> for Definiteness {
    fn from(i: Inertia) -> Self {
        match (i.positive, i.negative, i.zero) {
            (0, 0, _) => Definiteness::Zero,
            (_, 0, 0) => Definiteness::PositiveDefinite,
            (0, _, 0) => Definiteness::NegativeDefinite,
            (_, 0, _) => Definiteness::PositiveSemidefinite,
            (0, _, _) => Definiteness::NegativeSemidefinite,
            _ => Definiteness::Indefinite,
        }
    }
}

fn scaled_integer_matrix(sym: &RationalMatrix) -> Vec<Vec<BigInt>> {
    // A positive scalar multiple is congruent in sign pattern to the original.
    let n = sym.rows();
    let mut l: BigInt = One::one();
    for i in 0..n {
        for x in sym.row(i) {
            l = l.lcm(x.denom());
        }
    }
    let l = BigRational::from_integer(l);
    (0..n)
        .map(|i| sym.row(i).iter().map(|x| (x * &l).to_integer()).collect())
        .collect()
}

/// Integer arithmetic for the elimination; `None` signals overflow.
trait Exact: Clone + PartialOrd + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    /// `a * b - c * d`.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    fn div_rem(&self, d: &Self) -> (Self, Self);
}

impl Exact for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (self / d, self % d)
    }
}

impl Exact for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(a * b - c * d)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        Integer::div_rem(self, d)
    }
}

fn eliminate<T: Exact>(mut a: Vec<Vec<T>>) -> Option<Result<Inertia>> {
    let n = a.len();
    let zero = T::zero();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    let mut prev = T::one();
    for k in 0..n {
        let p = match (k..n).find(|&i| a[i][i] != zero) {
            Some(p) => p,
            None => {
                let off = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] != zero);
                let Some((i, j)) = off else {
                    out.zero += n - k;
                    return Some(Ok(out));
                };
                for c in k..n {
                    a[i][c] = a[i][c].add(&a[j][c])?;
                }
                for r in k..n {
                    a[r][i] = a[r][i].add(&a[r][j])?;
                }
                i
            }
        };
        a.swap(k, p);
        for row in a.iter_mut() {
            row.swap(k, p);
        }
        let pk = a[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = T::mul_sub(&pk, &a[i][j], &a[i][k], &a[k][j])?;
                let (q, r) = num.div_rem(&prev);
                if r != zero {
                    return Some(Err(Error::Internal("inexact division in symmetric elimination".into())));
                }
                a[i][j] = q;
            }
        }
        for i in k + 1..n {
            a[i][k] = zero.clone();
            a[k][i] = zero.clone();
        }
        // The LDL diagonal entry is pk / prev.
        if (pk > zero) == (prev > zero) {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        prev = pk;
    }
    Some(Ok(out))
}

/// Sylvester inertia by fraction-free symmetric elimination.
///
/// Pivots are taken from the diagonal. When every remaining diagonal entry
/// is zero but the block is not, the congruence `row_i += row_j`,
/// `col_i += col_j` creates the nonzero diagonal entry `2 a_ij`. A block
/// that is entirely zero contributes only to the radical.
pub fn inertia(sym: &RationalMatrix) -> Result<Inertia> {
    if !sym.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let a = scaled_integer_matrix(sym);
    let small: Option<Vec<Vec<i128>>> = a.iter().map(|r| r.iter().map(ToPrimitive::to_i128).collect()).collect();
    if let Some(res) = small.and_then(eliminate) {
        return res;
    }
    eliminate(a).expect("big integers do not overflow")
}

pub fn definiteness(sym: &RationalMatrix) -> Result<Definiteness> {
    inertia(sym).map(Definiteness::from)
}

/// Coefficients `[1, c_1, ..., c_n]` of `det(x I - A)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &RationalMatrix) -> Result<Vec<BigRational>> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidArgument(
            "characteristic polynomial needs a square matrix".into(),
        ));
    }
    let n = a.rows();
    let mut coeffs = vec![BigRational::one()];
    let mut m = RationalMatrix::zeros(n, n);
    let ident = RationalMatrix::identity(n);
    for k in 1..=n {
        let shift = scale(&ident, coeffs.last().unwrap());
        m = a.mul(&m)?.add(&shift)?;
        let am = a.mul(&m)?;
        let trace: BigRational = (0..n).map(|i| am.get(i, i).clone()).sum();
        coeffs.push(-trace / BigRational::from_integer(BigInt::from(k)));
    }
    Ok(coeffs)
}

fn scale(m: &RationalMatrix, s: &BigRational) -> RationalMatrix {
    let rows = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x * s).collect())
        .collect();
    RationalMatrix::from_rows(rows).expect("rectangular")
}

/// Faddeev-LeVerrier on an integer matrix, where every intermediate stays
/// integral; `None` on overflow.
fn characteristic_polynomial_i128(a: &[Vec<i128>]) -> Option<Vec<i128>> {
    let n = a.len();
    let mut coeffs = vec![1i128];
    let mut m = vec![vec![0i128; n]; n];
    let mul = |x: &[Vec<i128>], y: &[Vec<i128>]| -> Option<Vec<Vec<i128>>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).try_fold(0i128, |acc, k| acc.checked_add(x[i][k].checked_mul(y[k][j])?)))
                    .collect()
            })
            .collect()
    };
    for k in 1..=n {
        let c = *coeffs.last()?;
        m = mul(a, &m)?;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = row[i].checked_add(c)?;
        }
        let am = mul(a, &m)?;
        let trace = (0..n).try_fold(0i128, |acc, i| acc.checked_add(am[i][i]))?;
        coeffs.push(-trace / k as i128);
    }
    Some(coeffs)
}

/// Inertia read off the characteristic polynomial with Descartes' rule of
/// signs, which is exact because a symmetric matrix has only real roots.
/// Shares no code with [`inertia`].
pub fn eigen_sign_inertia(sym: &RationalMatrix) -> Result<Inertia> {
    if !sym.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = sym.rows();
    let small: Option<Vec<Vec<i128>>> = sym.to_integer_rows().and_then(|rows| {
        rows.iter()
            .map(|r| r.iter().map(ToPrimitive::to_i128).collect())
            .collect()
    });
    let signs: Vec<i8> = match small.as_deref().and_then(characteristic_polynomial_i128) {
        Some(c) => c.iter().map(|x| x.signum() as i8).collect(),
        None => characteristic_polynomial(sym)?
            .iter()
            .map(|x| {
                if x.is_zero() {
                    0
                } else if x.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect(),
    };
    let zero = signs.iter().rev().take_while(|&&c| c == 0).count();
    let nonzero: Vec<i8> = signs.into_iter().filter(|&c| c != 0).collect();
    let positive = nonzero.windows(2).filter(|w| w[0] != w[1]).count();
    Ok(Inertia {
        positive,
        negative: n - positive - zero,
        zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn def(rows: &[Vec<i64>]) -> Definiteness {
        definiteness(&RationalMatrix::from_rows_i64(rows)).unwrap()
    }

    #[test]
    fn definiteness_examples() {
        assert_eq!(def(&[vec![1, 0], vec![0, 1]]), Definiteness::PositiveDefinite);
        assert_eq!(def(&[vec![1, 0], vec![0, -1]]), Definiteness::Indefinite);
        assert_eq!(def(&[vec![2, -3], vec![-3, 2]]), Definiteness::Indefinite);
        assert_eq!(def(&[vec![2, -2], vec![-2, 2]]), Definiteness::PositiveSemidefinite);
        assert_eq!(def(&[vec![0, 0], vec![0, 0]]), Definiteness::Zero);
        assert_eq!(def(&[vec![0, 1], vec![1, 0]]), Definiteness::Indefinite);
        assert_eq!(def(&[vec![-1, 0], vec![0, 0]]), Definiteness::NegativeSemidefinite);
        assert_eq!(
            def(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]),
            Definiteness::Indefinite
        );
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = RationalMatrix::from_rows_i64(&[vec![1, 2], vec![0, 1]]);
        assert_eq!(definiteness(&m), Err(Error::NotSymmetric));
        assert_eq!(eigen_sign_inertia(&m), Err(Error::NotSymmetric));
    }

    #[test]
    fn charpoly_of_small_matrix() {
        let m = RationalMatrix::from_rows_i64(&[vec![2, 1], vec![1, 2]]);
        let c: Vec<i64> = characteristic_polynomial(&m)
            .unwrap()
            .iter()
            .map(|x| i64::try_from(x.to_integer()).unwrap())
            .collect();
        assert_eq!(c, vec![1, -4, 3]);
    }

    #[test]
    fn integer_and_rational_charpolys_agree() {
        let rows = vec![vec![2, -3, 0], vec![-3, 2, -1], vec![0, -1, 2]];
        let m = RationalMatrix::from_rows_i64(&rows);
        let big: Vec<i128> = characteristic_polynomial(&m)
            .unwrap()
            .iter()
            .map(|x| x.to_integer().to_i128().unwrap())
            .collect();
        let small: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect();
        assert_eq!(characteristic_polynomial_i128(&small).unwrap(), big);
    }

    #[test]
    fn eigen_oracle_agrees_on_semidefinite_kronecker() {
        let m = RationalMatrix::from_rows_i64(&[vec![2, -2], vec![-2, 2]]);
        let i = eigen_sign_inertia(&m).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 0, 1));
        assert_eq!(inertia(&m).unwrap(), i);
    }
}
