use std::thread;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::matrix::bareiss_echelon;
use crate::error::{Error, Result};
use crate::quiver::TitsTarget;

/// `coeffs . x = target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<i64>,
    pub target: i64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<i64>, target: i64) -> Self {
        LinearConstraint { coeffs, target }
    }
}

/// Dependent coordinate `x_pivot = (rhs - sum coeffs[f] x_f) / denom` over
/// the free coordinates.
struct Dependent {
    pivot: usize,
    denom: i128,
    rhs: i128,
    free_coeffs: Vec<i128>,
}

struct Plan {
    dim: usize,
    free: Vec<usize>,
    dependents: Vec<Dependent>,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("brute-force elimination"))
}

/// Eliminates the linear constraints once; `None` if they are inconsistent.
fn plan(linear: &[LinearConstraint], dim: usize) -> Result<Option<Plan>> {
    let rows: Vec<Vec<BigInt>> = linear
        .iter()
        .map(|c| {
            if c.coeffs.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: c.coeffs.len(),
                });
            }
            let mut r: Vec<BigInt> = c.coeffs.iter().map(|&x| x.into()).collect();
            r.push(c.target.into());
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let (mut ech, pivots) = bareiss_echelon(rows, dim + 1);
    if pivots.last() == Some(&dim) {
        return Ok(None);
    }
    // Back-substitute so that each pivot row mentions only its own pivot.
    for r in (0..pivots.len()).rev() {
        for above in 0..r {
            let c = pivots[r];
            if ech[above][c].is_zero() {
                continue;
            }
            let (f, g) = (ech[r][c].clone(), ech[above][c].clone());
            for j in 0..=dim {
                let v = &f * &ech[above][j] - &g * &ech[r][j];
                ech[above][j] = v;
            }
        }
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let dependents = pivots
        .iter()
        .zip(&ech)
        .map(|(&p, row)| {
            let mut denom = to_i128(&row[p])?;
            let mut rhs = to_i128(&row[dim])?;
            let mut free_coeffs = free.iter().map(|&f| to_i128(&row[f])).collect::<Result<Vec<_>>>()?;
            if denom < 0 {
                denom = -denom;
                rhs = -rhs;
                free_coeffs.iter_mut().for_each(|c| *c = -*c);
            }
            Ok(Dependent {
                pivot: p,
                denom,
                rhs,
                free_coeffs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(Plan { dim, free, dependents }))
}

fn quadratic_value(q: &[Vec<i64>], x: &[i64]) -> Option<i64> {
    let mut acc: i128 = 0;
    for (i, row) in q.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        for (j, &c) in row.iter().enumerate() {
            acc += i128::from(c) * i128::from(x[i]) * i128::from(x[j]);
        }
    }
    i64::try_from(acc).ok()
}

struct Search<'a> {
    plan: &'a Plan,
    quadratic: &'a [Vec<i64>],
    target: TitsTarget,
    bounds: &'a [(i64, i64)],
}

impl Search<'_> {
    /// Loops over the free coordinates; dependents are pruned by interval
    /// arithmetic once their remaining free terms can no longer bring them
    /// into the box.
    fn walk(&self, depth: usize, partial: &mut Vec<i128>, out: &mut Vec<Vec<i64>>) -> Result<()> {
        let plan = self.plan;
        if !self.dependents_feasible(partial) {
            return Ok(());
        }
        if depth == plan.free.len() {
            return self.leaf(partial, out);
        }
        let (lo, hi) = self.bounds[plan.free[depth]];
        for v in lo..=hi {
            partial.push(i128::from(v));
            self.walk(depth + 1, partial, out)?;
            partial.pop();
        }
        Ok(())
    }

    fn dependents_feasible(&self, partial: &[i128]) -> bool {
        let plan = self.plan;
        plan.dependents.iter().all(|d| {
            let mut lo = d.rhs;
            let mut hi = d.rhs;
            for (k, &c) in d.free_coeffs.iter().enumerate() {
                if k < partial.len() {
                    lo -= c * partial[k];
                    hi -= c * partial[k];
                } else {
                    let (blo, bhi) = self.bounds[plan.free[k]];
                    let (a, b) = (c * i128::from(blo), c * i128::from(bhi));
                    lo -= a.max(b);
                    hi -= a.min(b);
                }
            }
            let (blo, bhi) = self.bounds[d.pivot];
            // Numerator interval must meet denom * [blo, bhi].
            hi >= d.denom * i128::from(blo) && lo <= d.denom * i128::from(bhi)
        })
    }

    fn leaf(&self, free_vals: &[i128], out: &mut Vec<Vec<i64>>) -> Result<()> {
        let plan = self.plan;
        let mut x = vec![0i64; plan.dim];
        for (k, &f) in plan.free.iter().enumerate() {
            x[f] = free_vals[k] as i64;
        }
        for d in &plan.dependents {
            let num = d.rhs - d.free_coeffs.iter().zip(free_vals).map(|(c, v)| c * v).sum::<i128>();
            if num % d.denom != 0 {
                return Ok(());
            }
            let v = num / d.denom;
            let (lo, hi) = self.bounds[d.pivot];
            if v < i128::from(lo) || v > i128::from(hi) {
                return Ok(());
            }
            x[d.pivot] = v as i64;
        }
        let q = quadratic_value(self.quadratic, &x).ok_or(Error::Overflow("brute-force quadratic form"))?;
        if self.target.accepts(q) {
            out.push(x);
        }
        Ok(())
    }
}

fn validate(quadratic: &[Vec<i64>], bounds: &[(i64, i64)]) -> Result<()> {
    let dim = bounds.len();
    if quadratic.len() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: quadratic.len(),
        });
    }
    if let Some(r) = quadratic.iter().find(|r| r.len() != dim) {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: r.len(),
        });
    }
    Ok(())
}

/// Every integer point of the box `bounds` satisfying all linear constraints
/// and with `x^T Q x` accepted by `target`, sorted lexicographically.
///
/// An empty coordinate range (`lo > hi`) makes the box empty.
pub fn brute_force(
    linear: &[LinearConstraint],
    quadratic: &[Vec<i64>],
    target: TitsTarget,
    bounds: &[(i64, i64)],
) -> Result<Vec<Vec<i64>>> {
    brute_force_parallel(linear, quadratic, target, bounds, 1)
}

/// [`brute_force`] with the first free coordinate sharded over `jobs` threads.
pub fn brute_force_parallel(
    linear: &[LinearConstraint],
    quadratic: &[Vec<i64>],
    target: TitsTarget,
    bounds: &[(i64, i64)],
    jobs: usize,
) -> Result<Vec<Vec<i64>>> {
    validate(quadratic, bounds)?;
    if bounds.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let Some(plan) = plan(linear, bounds.len())? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    if plan.free.is_empty() || jobs <= 1 {
        let search = Search {
            plan: &plan,
            quadratic,
            target,
            bounds,
        };
        search.walk(0, &mut Vec::new(), &mut out)?;
    } else {
        let (lo, hi) = bounds[plan.free[0]];
        let width = (hi - lo) as usize + 1;
        let chunk = width.div_ceil(jobs);
        let results: Vec<Result<Vec<Vec<i64>>>> = thread::scope(|scope| {
            let plan = &plan;
            let handles: Vec<_> = (0..jobs)
                .filter_map(|j| {
                    let start = lo + (j * chunk) as i64;
                    if start > hi {
                        return None;
                    }
                    let end = (start + chunk as i64 - 1).min(hi);
                    let mut shard = bounds.to_vec();
                    shard[plan.free[0]] = (start, end);
                    Some(scope.spawn(move || {
                        let search = Search {
                            plan,
                            quadratic,
                            target,
                            bounds: &shard,
                        };
                        let mut part = Vec::new();
                        search.walk(0, &mut Vec::new(), &mut part).map(|_| part)
                    }))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        for r in results {
            out.extend(r?);
        }
    }
    out.sort();
    Ok(out)
}
