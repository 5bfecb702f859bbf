use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::certificate::finiteness_certificate;
use super::system::UlrichSystem;
use crate::error::{Error, Result};
use crate::oracle::{self, RationalMatrix};
use crate::quiver::{DimVector, TitsTarget};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// The affine set `p + N y` of rational points still admissible after some
/// coordinates have been fixed. `cols[k]` is the k-th column of `N`.
#[derive(Clone)]
struct Fibre {
    p: Vec<BigRational>,
    cols: Vec<Vec<BigRational>>,
}

impl Fibre {
    /// Restricts to `x_j = v`, or `None` when that leaves the fibre.
    fn fix(&self, j: usize, v: &BigRational) -> Option<Fibre> {
        let Some(m) = self.cols.iter().position(|c| !c[j].is_zero()) else {
            return (self.p[j] == *v).then(|| self.clone());
        };
        let pivot = &self.cols[m];
        let step = (v - &self.p[j]) / &pivot[j];
        let p = self.p.iter().zip(pivot).map(|(a, b)| a + b * &step).collect();
        let cols = self
            .cols
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != m)
            .map(|(_, c)| {
                let f = &c[j] / &pivot[j];
                c.iter().zip(pivot).map(|(a, b)| a - b * &f).collect()
            })
            .collect();
        Some(Fibre { p, cols })
    }
}

/// Smallest (`upward = false`) or largest integer `v` with
/// `|v - center| <= sqrt(radius_sq)`. Requires `radius_sq >= 0`.
fn ellipse_end(center: &BigRational, radius_sq: &BigRational, upward: bool) -> BigInt {
    let ok = |v: &BigInt| {
        let d = BigRational::from_integer(v.clone()) - center;
        let on_side = if upward { !d.is_positive() } else { !d.is_negative() };
        on_side || &d * &d <= *radius_sq
    };
    let r = radius_sq.to_f64().unwrap_or(0.0).sqrt();
    let c = center.to_f64().unwrap_or(0.0);
    let guess = if upward { c + r } else { c - r };
    let mut v = if guess.is_finite() && guess.abs() < 1e15 {
        BigInt::from(guess.round() as i64)
    } else {
        center.floor().to_integer()
    };
    let (step, back) = if upward {
        (BigInt::one(), -BigInt::one())
    } else {
        (-BigInt::one(), BigInt::one())
    };
    while !ok(&v) {
        v += &back;
    }
    while ok(&(&v + &step)) {
        v += &step;
    }
    v
}

struct Enumerator {
    dim: usize,
    /// `S = (E + E^T) / 2`, so that `q(x) = x^T S x`.
    s: RationalMatrix,
    euler: Vec<Vec<i64>>,
    target: TitsTarget,
    /// Cap on every coordinate (`None` for the ellipsoid alone).
    bound: Option<i64>,
    /// Use the ellipsoid `q <= target.upper()` to bound coordinates.
    ellipsoid: bool,
}

impl Enumerator {
    /// Integer range of coordinate `j` over the current fibre.
    fn interval(&self, f: &Fibre, j: usize) -> Result<Option<(i64, i64)>> {
        let mut lo = BigInt::zero();
        let mut hi: Option<BigInt> = self.bound.map(BigInt::from);
        if self.ellipsoid && !f.cols.is_empty() {
            let n = RationalMatrix::from_rows(f.cols.clone())?.transpose();
            let sn = self.s.mul(&n)?;
            let q = n.transpose().mul(&sn)?;
            let qinv = q
                .inverse()
                .map_err(|_| Error::Internal("restricted Tits form lost definiteness".into()))?;
            let sp = self.s.mul_vec(&f.p)?;
            let b = n.transpose().mul_vec(&sp)?;
            let c: BigRational = f.p.iter().zip(&sp).map(|(a, b)| a * b).sum();
            let qinv_b = qinv.mul_vec(&b)?;
            let min = &c - b.iter().zip(&qinv_b).map(|(x, y)| x * y).sum::<BigRational>();
            let slack = rat(self.target.upper()) - min;
            if slack.is_negative() {
                return Ok(None);
            }
            let nj: Vec<BigRational> = f.cols.iter().map(|col| col[j].clone()).collect();
            let center = &f.p[j] - nj.iter().zip(&qinv_b).map(|(x, y)| x * y).sum::<BigRational>();
            let spread: BigRational = nj.iter().zip(qinv.mul_vec(&nj)?).map(|(x, y)| x * y).sum();
            let radius_sq = slack * spread;
            let elo = ellipse_end(&center, &radius_sq, false);
            let ehi = ellipse_end(&center, &radius_sq, true);
            lo = lo.max(elo);
            hi = Some(hi.map_or(ehi.clone(), |h| h.min(ehi)));
        } else if f.cols.is_empty() || f.cols.iter().all(|c| c[j].is_zero()) {
            let pj = &f.p[j];
            if !pj.is_integer() {
                return Ok(None);
            }
            let v = pj.to_integer();
            lo = lo.max(v.clone());
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        }
        let Some(hi) = hi else {
            return Err(Error::MissingBound("the restricted Tits form is not positive definite"));
        };
        if lo > hi {
            return Ok(None);
        }
        let conv = |x: &BigInt| x.to_i64().ok_or(Error::Overflow("candidate enumeration"));
        Ok(Some((conv(&lo)?, conv(&hi)?)))
    }

    fn walk(&self, f: &Fibre, j: usize, out: &mut Vec<Vec<i64>>) -> Result<()> {
        if j == self.dim {
            return self.leaf(f, out);
        }
        let Some((lo, hi)) = self.interval(f, j)? else {
            return Ok(());
        };
        for v in lo..=hi {
            if let Some(next) = f.fix(j, &rat(v)) {
                self.walk(&next, j + 1, out)?;
            }
        }
        Ok(())
    }

    fn leaf(&self, f: &Fibre, out: &mut Vec<Vec<i64>>) -> Result<()> {
        let x =
            f.p.iter()
                .map(|v| {
                    if !v.is_integer() {
                        return Err(Error::Internal("fixed coordinates left a fractional point".into()));
                    }
                    v.to_integer().to_i64().ok_or(Error::Overflow("candidate enumeration"))
                })
                .collect::<Result<Vec<i64>>>()?;
        let d = DimVector::new(x);
        if !d.is_positive() {
            return Ok(());
        }
        let q = tits_checked(&self.euler, d.entries())?;
        if self.target.accepts(q) {
            out.push(d.0);
        }
        Ok(())
    }
}

fn tits_checked(euler: &[Vec<i64>], x: &[i64]) -> Result<i64> {
    let mut acc: i128 = 0;
    for (i, row) in euler.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            acc += i128::from(c) * i128::from(x[i]) * i128::from(x[j]);
        }
    }
    i64::try_from(acc).map_err(|_| Error::Overflow("Tits form"))
}

fn setup(sys: &UlrichSystem, target: TitsTarget, bound: Option<i64>) -> Result<Option<(Enumerator, Fibre)>> {
    if let Some(b) = bound {
        if b < 0 {
            return Err(Error::InvalidArgument(format!("bound must be non-negative, got {b}")));
        }
    }
    if target == TitsTarget::Negative && bound.is_none() {
        return Err(Error::MissingBound("negative Tits values are unbounded in general"));
    }
    let cert = finiteness_certificate(sys)?;
    if !cert.is_positive_definite() && bound.is_none() {
        return Err(Error::MissingBound("the restricted Tits form is not positive definite"));
    }
    let forms = RationalMatrix::from_rows_i64(&[sys.rank_form(), sys.chi_form()]);
    let Some(p) = forms.solve_particular(&[rat(sys.rank()), rat(0)])? else {
        return Ok(None);
    };
    let cols = oracle::nullspace(&forms);
    let euler = sys.quiver().euler_matrix();
    let sym = sys.quiver().symmetrized_matrix();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let s = RationalMatrix::from_rows(
        sym.iter()
            .map(|r| r.iter().map(|&x| rat(x) * &half).collect())
            .collect(),
    )?;
    let e = Enumerator {
        dim: sys.dim(),
        s,
        euler,
        target,
        bound,
        ellipsoid: cert.is_positive_definite(),
    };
    Ok(Some((e, Fibre { p, cols })))
}

/// All positive integer vectors with `rank_form = r`, `chi_form = 0` and Tits
/// value accepted by `target`, sorted lexicographically.
///
/// With a positive definite certificate and no bound the list is complete.
/// With a bound it is complete within the box `[0, bound]^n`. The bound is
/// mandatory for the negative target and for systems without a positive
/// definite certificate.
pub fn enumerate_candidates(sys: &UlrichSystem, target: TitsTarget, bound: Option<i64>) -> Result<Vec<DimVector>> {
    enumerate_candidates_parallel(sys, target, bound, 1)
}

/// [`enumerate_candidates`] with the first coordinate's range split over
/// `jobs` worker threads. The output is identical for every `jobs`.
pub fn enumerate_candidates_parallel(
    sys: &UlrichSystem,
    target: TitsTarget,
    bound: Option<i64>,
    jobs: usize,
) -> Result<Vec<DimVector>> {
    let Some((e, fibre)) = setup(sys, target, bound)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    if jobs <= 1 {
        e.walk(&fibre, 0, &mut out)?;
    } else if let Some((lo, hi)) = e.interval(&fibre, 0)? {
        let values: Vec<i64> = (lo..=hi).collect();
        let chunk = values.len().div_ceil(jobs).max(1);
        let parts: Vec<Result<Vec<Vec<i64>>>> = thread::scope(|scope| {
            let (e, fibre) = (&e, &fibre);
            let handles: Vec<_> = values
                .chunks(chunk)
                .map(|vals| {
                    scope.spawn(move || {
                        let mut part = Vec::new();
                        for &v in vals {
                            if let Some(next) = fibre.fix(0, &rat(v)) {
                                e.walk(&next, 1, &mut part)?;
                            }
                        }
                        Ok(part)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        for p in parts {
            out.extend(p?);
        }
    }
    out.sort();
    Ok(out.into_iter().map(DimVector::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Divisor, Surface};

    fn sys(s: Surface, h: &[i64], r: i64) -> UlrichSystem {
        UlrichSystem::build(s, &Divisor::new(s, h.to_vec()).unwrap(), r).unwrap()
    }

    fn vecs(v: Vec<DimVector>) -> Vec<Vec<i64>> {
        v.into_iter().map(|d| d.0).collect()
    }

    #[test]
    fn projective_plane_examples() {
        let line = sys(Surface::P2, &[1], 1);
        assert_eq!(
            vecs(enumerate_candidates(&line, TitsTarget::Exactly(1), None).unwrap()),
            vec![vec![0, 1]]
        );
        assert_eq!(
            vecs(enumerate_candidates(&line, TitsTarget::Exactly(1), Some(10)).unwrap()),
            vec![vec![0, 1]]
        );
        let conic = sys(Surface::P2, &[2], 2);
        assert_eq!(
            vecs(enumerate_candidates(&conic, TitsTarget::Exactly(1), None).unwrap()),
            vec![vec![1, 3]]
        );
    }

    #[test]
    fn quadric_spinors() {
        let s = sys(Surface::P1XP1, &[1, 1], 1);
        assert_eq!(
            vecs(enumerate_candidates(&s, TitsTarget::Exactly(1), None).unwrap()),
            vec![vec![0, 0, 1], vec![0, 1, 0]]
        );
    }

    #[test]
    fn cubic_negative_witness() {
        let s = sys(Surface::X3, &[3, -1, -1, -1], 1);
        let got = vecs(enumerate_candidates(&s, TitsTarget::Negative, Some(3)).unwrap());
        assert_eq!(got, vec![vec![1, 1, 1, 1, 1]]);
        assert_eq!(enumerate_candidates(&s, TitsTarget::Exactly(1), None).unwrap().len(), 8);
        assert!(enumerate_candidates(&s, TitsTarget::Exactly(0), None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn bound_requirements() {
        let s = sys(Surface::X3, &[3, -1, -1, -1], 1);
        assert!(matches!(
            enumerate_candidates(&s, TitsTarget::Negative, None),
            Err(Error::MissingBound(_))
        ));
        let h = Divisor::new(Surface::X3, vec![1, -1, -1, -1]).unwrap();
        let bad = UlrichSystem::build_unchecked(Surface::X3, &h, 1).unwrap();
        assert!(matches!(
            enumerate_candidates(&bad, TitsTarget::Exactly(1), None),
            Err(Error::MissingBound(_))
        ));
        assert!(enumerate_candidates(&bad, TitsTarget::Exactly(1), Some(4)).is_ok());
    }

    #[test]
    fn parallel_is_deterministic() {
        let s = sys(Surface::X4, &[3, -1, -1, -1, -1], 2);
        let serial = enumerate_candidates(&s, TitsTarget::Exactly(1), None).unwrap();
        for jobs in [2, 4, 9] {
            assert_eq!(
                enumerate_candidates_parallel(&s, TitsTarget::Exactly(1), None, jobs).unwrap(),
                serial
            );
        }
    }
}
