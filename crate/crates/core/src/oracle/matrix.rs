use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        let n = rows.len();
        Ok(RationalMatrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Panics on ragged input, which only arises from programming errors.
    pub fn from_rows_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        RationalMatrix::from_rows(rows).expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidArgument("matrix shapes differ".into()));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Entries as integers, or `None` if some entry has a denominator.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.is_integer().then(|| x.to_integer()))
                    .collect()
            })
            .collect()
    }

    /// Each row multiplied by the lcm of its denominators. Preserves the
    /// row space, hence the nullspace.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter()
                    .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect()
    }

    /// Inverse of a square matrix by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("only square matrices are invertible".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = RationalMatrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))?;
            a.swap(c, p);
            inv.swap(c, p);
            let pivot = a[c][c].clone();
            for j in 0..n {
                a[c][j] /= &pivot;
                inv[c][j] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let (ac, ic) = (a[c][j].clone(), inv[c][j].clone());
                    a[r][j] -= &f * ac;
                    inv[r][j] -= &f * ic;
                }
            }
        }
        RationalMatrix::from_rows(inv)
    }

    /// Some solution of `self * x = rhs`, or `None` if the system is inconsistent.
    pub fn solve_particular(&self, rhs: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if rhs.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let mut a: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        let n = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..n {
            let Some(p) = (row..a.len()).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let pivot = a[row][c].clone();
            for x in a[row].iter_mut() {
                *x /= &pivot;
            }
            for r in 0..a.len() {
                if r != row && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..=n {
                        let v = a[row][j].clone();
                        a[r][j] -= &f * v;
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        if a[row..].iter().any(|r| !r[n].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![BigRational::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = a[r][n].clone();
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "RationalMatrix{rows:?}")
    }
}

/// Scales an integer vector to be primitive with its first nonzero entry positive.
pub fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
}

/// Fraction-free forward elimination. Returns the echelon rows and the
/// pivot column of each row. The pivot is always the leftmost column with
/// a nonzero entry among the remaining rows.
pub(crate) fn bareiss_echelon(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for c in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        for r in row + 1..a.len() {
            for j in c + 1..cols {
                let v = (&a[row][c] * &a[r][j] - &a[r][c] * &a[row][j]) / &prev;
                a[r][j] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[row][c].clone();
        pivots.push(c);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

/// Basis of the right nullspace. Each vector is primitive integral with a
/// positive leading entry; one vector per free column, in column order.
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    integer_nullspace(m)
        .into_iter()
        .map(|v| v.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

pub fn integer_nullspace(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols();
    let (echelon, pivots) = bareiss_echelon(m.integer_rows(), n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); n];
            x[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = BigRational::zero();
                for j in pc + 1..n {
                    if !echelon[r][j].is_zero() {
                        acc += BigRational::from_integer(echelon[r][j].clone()) * &x[j];
                    }
                }
                x[pc] = -acc / BigRational::from_integer(echelon[r][pc].clone());
            }
            let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mut v: Vec<BigInt> = x
                .iter()
                .map(|v| (v * BigRational::from_integer(l.clone())).to_integer())
                .collect();
            primitive(&mut v);
            v
        })
        .collect()
}

pub fn rank(m: &RationalMatrix) -> usize {
    bareiss_echelon(m.integer_rows(), m.cols()).1.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[Vec<BigRational>]) -> Vec<Vec<i64>> {
        v.iter()
            .map(|r| r.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect())
            .collect()
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&RationalMatrix::identity(2)).is_empty());
        let m = RationalMatrix::from_rows_i64(&[vec![-1, 1, 1], vec![1, 0, 0]]);
        assert_eq!(ints(&nullspace(&m)), vec![vec![0, 1, -1]]);
        let z = RationalMatrix::zeros(1, 3);
        assert_eq!(ints(&nullspace(&z)), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn nullspace_with_fractions() {
        let half = BigRational::new(1.into(), 2.into());
        let m = RationalMatrix::from_rows(vec![vec![half, BigRational::from_integer((-3).into())]]).unwrap();
        assert_eq!(ints(&nullspace(&m)), vec![vec![6, 1]]);
    }

    #[test]
    fn inverse_and_solve() {
        let m = RationalMatrix::from_rows_i64(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert!(RationalMatrix::from_rows_i64(&[vec![1, 1], vec![1, 1]])
            .inverse()
            .is_err());

        let a = RationalMatrix::from_rows_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let rhs: Vec<BigRational> = [2, 3].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let x = a.solve_particular(&rhs).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), rhs);
        let inconsistent = RationalMatrix::from_rows_i64(&[vec![1, 1], vec![2, 2]]);
        let rhs: Vec<BigRational> = [1, 3].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        assert_eq!(inconsistent.solve_particular(&rhs).unwrap(), None);
    }

    #[test]
    fn rank_counts_pivots() {
        assert_eq!(rank(&RationalMatrix::from_rows_i64(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank(&RationalMatrix::identity(3)), 3);
    }
}
