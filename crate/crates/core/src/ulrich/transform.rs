//! The diagonalizing changes of variables on the rank hyperplane of the cubic
//! and quartic systems, checked exactly.
//!
//! Each new coordinate has the shape `sqrt(c) * (w . v)` with `c` and `w`
//! rational. Only squares and products of such coordinates with matching
//! surd parts are ever formed, so every check reduces to rational matrix
//! identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::system::UlrichSystem;
use crate::error::{Error, Result};
use crate::lattice::{Divisor, Surface, SurfaceKind};
use crate::oracle::{self, RationalMatrix};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x, 1)).collect()
}

/// `sqrt(radicand) * (coeffs . v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdForm {
    pub radicand: Q,
    pub coeffs: Vec<Q>,
}

impl SurdForm {
    fn new(radicand: Q, coeffs: Vec<Q>) -> Self {
        SurdForm { radicand, coeffs }
    }

    fn dot(&self, v: &[Q]) -> Q {
        self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `self` applied to the outputs of `inner`, provided the inner surd
    /// parts that actually occur share one square class.
    fn compose(&self, inner: &[SurdForm]) -> Result<SurdForm> {
        let used: Vec<usize> = (0..self.coeffs.len()).filter(|&k| !self.coeffs[k].is_zero()).collect();
        let Some(&first) = used.first() else {
            return Ok(SurdForm::new(Q::zero(), vec![Q::zero(); inner[0].coeffs.len()]));
        };
        let base = inner[first].radicand.clone();
        let n = inner[0].coeffs.len();
        let mut coeffs = vec![Q::zero(); n];
        for &k in &used {
            let ratio = rational_sqrt(&(&inner[k].radicand / &base))
                .ok_or_else(|| Error::Internal("composed coordinates mix incompatible surds".into()))?;
            let scale = &self.coeffs[k] * ratio;
            for (c, w) in coeffs.iter_mut().zip(&inner[k].coeffs) {
                *c += &scale * w;
            }
        }
        Ok(SurdForm::new(&self.radicand * base, coeffs))
    }
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a non-negative rational, if rational.
fn rational_sqrt(x: &Q) -> Option<Q> {
    Some(Q::new(integer_sqrt(x.numer())?, integer_sqrt(x.denom())?))
}

/// A diagonal quadratic form `sum sign_i * y_i^2` in surd coordinates.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub forms: Vec<SurdForm>,
    pub signs: Vec<i64>,
}

impl Diagonalization {
    /// Gram matrix `sum sign_i c_i w_i w_i^T` of the form in the original variables.
    pub fn gram(&self) -> RationalMatrix {
        let n = self.forms[0].coeffs.len();
        let mut g = RationalMatrix::zeros(n, n);
        for (f, &s) in self.forms.iter().zip(&self.signs) {
            let cw = &f.radicand * q(s, 1);
            for i in 0..n {
                for j in 0..n {
                    let v = g.get(i, j) + &cw * &f.coeffs[i] * &f.coeffs[j];
                    g.set(i, j, v);
                }
            }
        }
        g
    }

    pub fn value(&self, v: &[Q]) -> Q {
        self.forms
            .iter()
            .zip(&self.signs)
            .map(|(f, &s)| {
                let d = f.dot(v);
                q(s, 1) * &f.radicand * &d * &d
            })
            .sum()
    }
}

fn cubic() -> Result<Diagonalization> {
    let first = [
        SurdForm::new(q(1, 1), qv(&[1, 0, 0, 0, 0])),
        SurdForm::new(q(1, 1), qv(&[0, 1, 0, 0, 0])),
        SurdForm::new(q(1, 1), qv(&[0, 0, 1, 0, 0])),
        SurdForm::new(q(1, 2), qv(&[0, 0, 0, 1, -1])),
        SurdForm::new(q(3, 2), qv(&[0, 0, 0, 1, 1])),
    ];
    let second = [
        SurdForm::new(q(1, 3), qv(&[1, 1, 1, 0, 0])),
        SurdForm::new(q(1, 1), qv(&[-2, 2, 0, 0, 0])),
        SurdForm::new(q(4, 3), qv(&[-1, -1, 2, 0, 0])),
        SurdForm::new(q(8, 1), qv(&[0, 0, 0, 1, 0])),
    ];
    Ok(Diagonalization {
        forms: second.iter().map(|f| f.compose(&first)).collect::<Result<_>>()?,
        signs: vec![-1, 1, 1, 1],
    })
}

fn quartic() -> Diagonalization {
    Diagonalization {
        forms: vec![
            SurdForm::new(q(9, 2), qv(&[-1, 0, 0, 0, 1, 0])),
            SurdForm::new(q(3, 2), qv(&[-1, 0, 0, 2, -1, 0])),
            SurdForm::new(q(3, 4), qv(&[-1, 0, 3, -1, -1, 0])),
            SurdForm::new(q(9, 20), qv(&[-1, 4, -1, -1, -1, 0])),
            SurdForm::new(q(1, 5), qv(&[1, 1, 1, 1, 1, 0])),
        ],
        signs: vec![1, 1, 1, 1, -1],
    }
}

/// The diagonalization for `s` and the factor `k` such that it equals
/// `k * tits` on the rank hyperplane.
pub fn transformation(s: Surface) -> Result<(Diagonalization, i64)> {
    match s.kind() {
        SurfaceKind::BlowUp(3) => Ok((cubic()?, 8)),
        SurfaceKind::BlowUp(4) => Ok((quartic(), 9)),
        _ => Err(Error::Unsupported {
            operation: "change-of-variables identities",
            surface: s,
        }),
    }
}

/// The normal of the chi hyperplane in the new coordinates, as surd forms in
/// the polarization: `(n_i)` with `n . y = k' * chi_form(v)` on the rank
/// hyperplane. Returns the forms evaluated at `h` and `k'`.
fn normal(s: Surface, h: &Divisor) -> Result<(Vec<SurdForm>, i64)> {
    let c = h.coeffs();
    let one = |r: Q, x: i64| SurdForm::new(r, vec![q(x, 1)]);
    Ok(match s.kind() {
        SurfaceKind::BlowUp(3) => {
            let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
            (
                vec![
                    one(q(1, 3), 3 * a + b + cc + d),
                    one(q(1, 1), -b + cc),
                    one(q(1, 3), -b - cc + 2 * d),
                    one(q(1, 1), a + b + cc + d),
                ],
                4,
            )
        }
        SurfaceKind::BlowUp(4) => {
            let (a, b, cc, d, e) = (c[0], c[1], c[2], c[3], c[4]);
            (
                vec![
                    one(q(1, 2), a + b + cc + d),
                    one(q(1, 6), -a + b - cc - d - 2 * e),
                    one(q(1, 12), -a - 2 * b + 2 * cc - d - 2 * e),
                    one(q(1, 20), -a - 2 * b - 2 * cc + 3 * d - 2 * e),
                    one(q(1, 5), 3 * a + b + cc + d + e),
                ],
                3,
            )
        }
        _ => {
            return Err(Error::Unsupported {
                operation: "change-of-variables identities",
                surface: s,
            })
        }
    })
}

fn check_polarization(s: Surface, h: &Divisor) -> Result<()> {
    if h.surface() != s {
        return Err(Error::SurfaceMismatch(s, h.surface()));
    }
    Ok(())
}

/// Squared length of the chi hyperplane's normal under the dual of the
/// diagonal form, timelike coordinate counted positively.
/// Positive exactly when the hyperplane meets the light cone only at 0.
pub fn cone_margin(s: Surface, h: &Divisor) -> Result<Q> {
    check_polarization(s, h)?;
    let (n, _) = normal(s, h)?;
    let (diag, _) = transformation(s)?;
    Ok(n.iter()
        .zip(&diag.signs)
        .map(|(f, &sign)| -q(sign, 1) * &f.radicand * &f.coeffs[0] * &f.coeffs[0])
        .sum())
}

/// The linear form `n . y` pulled back to the original variables.
fn pulled_back_normal(diag: &Diagonalization, n: &[SurdForm]) -> Result<Vec<Q>> {
    let dim = diag.forms[0].coeffs.len();
    let mut out = vec![Q::zero(); dim];
    for (f, nf) in diag.forms.iter().zip(n) {
        let surd = rational_sqrt(&(&f.radicand * &nf.radicand))
            .ok_or_else(|| Error::Internal("normal and coordinate surds do not cancel".into()))?;
        let scale = surd * &nf.coeffs[0];
        for (o, w) in out.iter_mut().zip(&f.coeffs) {
            *o += &scale * w;
        }
    }
    Ok(out)
}

/// Basis of the homogenized rank hyperplane, as matrix columns.
fn hyperplane_basis(sys: &UlrichSystem) -> RationalMatrix {
    let forms = RationalMatrix::from_rows_i64(&[sys.rank_form()]);
    RationalMatrix::from_rows(oracle::nullspace(&forms))
        .expect("rectangular")
        .transpose()
}

/// Checks, for `v` on the homogenized rank hyperplane, that the diagonal
/// form equals a fixed multiple of the Tits form at `v`, that the two agree
/// as matrices on the whole hyperplane, and that the transformed normal
/// reproduces the chi constraint.
pub fn verify_transformations(s: Surface, h: &Divisor, v: &[Q]) -> Result<bool> {
    check_polarization(s, h)?;
    let (diag, k) = transformation(s)?;
    let sys = UlrichSystem::build_unchecked(s, h, 1)?;
    if v.len() != sys.dim() {
        return Err(Error::LengthMismatch {
            expected: sys.dim(),
            got: v.len(),
        });
    }
    let on_plane: Q = sys.rank_form().iter().zip(v).map(|(&a, b)| q(a, 1) * b).sum();
    if !on_plane.is_zero() {
        return Err(Error::OffSubspace);
    }
    let sym = RationalMatrix::from_rows_i64(&sys.quiver().symmetrized_matrix());
    let tits: Q = sym.mul_vec(v)?.iter().zip(v).map(|(a, b)| a * b).sum::<Q>() / q(2, 1);
    if diag.value(v) != q(k, 1) * &tits {
        return Ok(false);
    }

    let basis = hyperplane_basis(&sys);
    let bt = basis.transpose();
    let lhs = bt.mul(&diag.gram())?.mul(&basis)?;
    let half_k = RationalMatrix::from_rows(
        sym.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * q(k, 2)).collect())
            .collect(),
    )?;
    if lhs != bt.mul(&half_k)?.mul(&basis)? {
        return Ok(false);
    }

    let (n, kn) = normal(s, h)?;
    let pulled = pulled_back_normal(&diag, &n)?;
    let diff: Vec<Q> = pulled
        .iter()
        .zip(sys.chi_form())
        .map(|(p, &c)| p - q(kn * c, 1))
        .collect();
    Ok(bt.mul_vec(&diff)?.iter().all(Zero::is_zero))
}
