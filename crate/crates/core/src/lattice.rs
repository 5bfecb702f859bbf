//! Picard lattices of `P^2`, `P^1 x P^1` and the blow-ups `X_d` of `P^2` in
//! `d` general points.
//!
//! Bases:
//!
//! * `P^2`: the line class `l`.
//! * `P^1 x P^1`: the two rulings, so `(a, b)` is the bidegree of `O(a, b)`.
//! * `X_d`: `(l, l_1, ..., l_d)` with `l` the pulled-back line and `l_i` the
//!   exceptional curves. `l^2 = 1`, `l_i^2 = -1`, mixed products vanish.
//!
//! Ample classes on `X_d` have *negative* exceptional coefficients, e.g. the
//! anticanonical class of `X_3` is `(3, -1, -1, -1)`.
//!
//! All arithmetic is on `i64` with overflow checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceKind {
    ProjectivePlane,
    QuadricProduct,
    /// `P^2` blown up in `d` general points, `1 <= d <= 8`.
    BlowUp(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surface {
    kind: SurfaceKind,
}

impl Surface {
    pub const P2: Surface = Surface {
        kind: SurfaceKind::ProjectivePlane,
    };
    pub const P1XP1: Surface = Surface {
        kind: SurfaceKind::QuadricProduct,
    };
    pub const X3: Surface = Surface {
        kind: SurfaceKind::BlowUp(3),
    };
    pub const X4: Surface = Surface {
        kind: SurfaceKind::BlowUp(4),
    };

    pub fn blow_up(points: u8) -> Result<Self> {
        if !(1..=8).contains(&points) {
            return Err(Error::InvalidArgument(format!(
                "del Pezzo blow-ups exist for 1..=8 points, got {points}"
            )));
        }
        Ok(Surface {
            kind: SurfaceKind::BlowUp(points),
        })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn picard_rank(&self) -> usize {
        match self.kind {
            SurfaceKind::ProjectivePlane => 1,
            SurfaceKind::QuadricProduct => 2,
            SurfaceKind::BlowUp(d) => d as usize + 1,
        }
    }

    /// Number of blown-up points, `None` unless this is some `X_d`.
    pub fn blown_up_points(&self) -> Option<usize> {
        match self.kind {
            SurfaceKind::BlowUp(d) => Some(d as usize),
            _ => None,
        }
    }

    /// Whether the ampleness criterion is known for this surface.
    pub fn has_ampleness_criterion(&self) -> bool {
        matches!(
            self.kind,
            SurfaceKind::ProjectivePlane
                | SurfaceKind::QuadricProduct
                | SurfaceKind::BlowUp(3)
                | SurfaceKind::BlowUp(4)
        )
    }

    /// The short name used on the command line and in reports.
    pub fn name(&self) -> String {
        match self.kind {
            SurfaceKind::ProjectivePlane => "p2".to_string(),
            SurfaceKind::QuadricProduct => "p1xp1".to_string(),
            SurfaceKind::BlowUp(d) => format!("x{d}"),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Surface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p2" => Ok(Surface::P2),
            "p1xp1" => Ok(Surface::P1XP1),
            other => {
                let points = other
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown surface {s:?}")))?;
                Surface::blow_up(points).map_err(|_| Error::Parse(format!("unknown surface {s:?}")))
            }
        }
    }
}

impl Serialize for Surface {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Surface {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A divisor class, as integer coordinates in the surface's Picard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    surface: Surface,
    coeffs: Vec<i64>,
}

impl Divisor {
    pub fn new(surface: Surface, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != surface.picard_rank() {
            return Err(Error::LengthMismatch {
                expected: surface.picard_rank(),
                got: coeffs.len(),
            });
        }
        Ok(Divisor { surface, coeffs })
    }

    pub fn zero(surface: Surface) -> Self {
        Divisor {
            surface,
            coeffs: vec![0; surface.picard_rank()],
        }
    }

    /// The `i`-th basis vector.
    pub fn basis(surface: Surface, i: usize) -> Result<Self> {
        let mut d = Divisor::zero(surface);
        let rank = surface.picard_rank();
        *d.coeffs.get_mut(i).ok_or(Error::LengthMismatch {
            expected: rank,
            got: i + 1,
        })? = 1;
        Ok(d)
    }

    /// Parses a comma separated coefficient list such as `"3,-1,-1,-1"`.
    pub fn parse(surface: Surface, text: &str) -> Result<Self> {
        let coeffs = parse_int_list(text)?;
        Divisor::new(surface, coeffs)
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn same_surface(&self, other: &Divisor) -> Result<()> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch(self.surface, other.surface));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Divisor) -> Result<Divisor> {
        self.same_surface(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("divisor addition")))
            .collect::<Result<_>>()?;
        Ok(Divisor {
            surface: self.surface,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Divisor> {
        self.checked_scale(-1)
    }

    pub fn checked_scale(&self, n: i64) -> Result<Divisor> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(n).ok_or(Error::Overflow("divisor scaling")))
            .collect::<Result<_>>()?;
        Ok(Divisor {
            surface: self.surface,
            coeffs,
        })
    }

    fn line_and_exceptionals(&self) -> (i64, &[i64]) {
        (self.coeffs[0], &self.coeffs[1..])
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub(crate) fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse("empty integer list".into()));
    }
    trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer: {:?}", part.trim())))
        })
        .collect()
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("lattice arithmetic"))
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("lattice arithmetic"))
}

/// The intersection pairing.
pub fn intersect(d1: &Divisor, d2: &Divisor) -> Result<i64> {
    d1.same_surface(d2)?;
    let (x, y) = (&d1.coeffs, &d2.coeffs);
    match d1.surface.kind {
        SurfaceKind::ProjectivePlane => mul(x[0], y[0]),
        SurfaceKind::QuadricProduct => add(mul(x[0], y[1])?, mul(x[1], y[0])?),
        SurfaceKind::BlowUp(_) => {
            let mut acc = mul(x[0], y[0])?;
            for (b, c) in x[1..].iter().zip(&y[1..]) {
                acc = acc.checked_sub(mul(*b, *c)?).ok_or(Error::Overflow("intersection"))?;
            }
            Ok(acc)
        }
    }
}

/// `K_X`: `-3l` on `P^2`, `(-2, -2)` on the quadric, `-3l + sum l_i` on `X_d`.
pub fn canonical_class(s: Surface) -> Divisor {
    let coeffs = match s.kind {
        SurfaceKind::ProjectivePlane => vec![-3],
        SurfaceKind::QuadricProduct => vec![-2, -2],
        SurfaceKind::BlowUp(d) => {
            let mut c = vec![1; d as usize + 1];
            c[0] = -3;
            c
        }
    };
    Divisor { surface: s, coeffs }
}

/// Riemann-Roch for line bundles: `chi(O(D))`.
///
/// On `X_d` the formula is a sum of halves; the doubled value is computed in
/// integers and must come out even.
pub fn chi(d: &Divisor) -> Result<i64> {
    let c = &d.coeffs;
    let doubled = match d.surface.kind {
        SurfaceKind::QuadricProduct => return mul(add(c[0], 1)?, add(c[1], 1)?),
        SurfaceKind::ProjectivePlane => mul(add(c[0], 1)?, add(c[0], 2)?)?,
        SurfaceKind::BlowUp(_) => {
            let (a, bs) = d.line_and_exceptionals();
            let mut acc = mul(add(a, 1)?, add(a, 2)?)?;
            for &b in bs {
                let one_minus_b = 1i64.checked_sub(b).ok_or(Error::Overflow("chi"))?;
                acc = add(acc, mul(b, one_minus_b)?)?;
            }
            acc
        }
    };
    if doubled % 2 != 0 {
        return Err(Error::Internal(format!(
            "Riemann-Roch returned the half-integer {doubled}/2 for {d} on {}",
            d.surface
        )));
    }
    Ok(doubled / 2)
}

fn triple_sums(d: &Divisor) -> impl Iterator<Item = Result<i64>> + '_ {
    let (a, bs) = d.line_and_exceptionals();
    (0..bs.len()).flat_map(move |i| (i + 1..bs.len()).map(move |j| add(a, bs[i]).and_then(|s| add(s, bs[j]))))
}

fn blow_up_inequalities(d: &Divisor, coeff_max: i64, triple_min: i64) -> Result<bool> {
    let (_, bs) = d.line_and_exceptionals();
    if bs.iter().any(|&b| b > coeff_max) {
        return Ok(false);
    }
    for sum in triple_sums(d) {
        if sum? < triple_min {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Very ampleness, which coincides with ampleness on every supported surface.
///
/// `X_3`, `X_4`: every exceptional coefficient `<= -1` and `a + b_i + b_j >= 1`
/// for all pairs. `P^2`: `a >= 1`. Quadric: `a, b >= 1`.
pub fn is_very_ample(d: &Divisor) -> Result<bool> {
    let c = &d.coeffs;
    match d.surface.kind {
        SurfaceKind::ProjectivePlane => Ok(c[0] >= 1),
        SurfaceKind::QuadricProduct => Ok(c[0] >= 1 && c[1] >= 1),
        SurfaceKind::BlowUp(3) | SurfaceKind::BlowUp(4) => blow_up_inequalities(d, -1, 1),
        SurfaceKind::BlowUp(_) => Err(Error::Unsupported {
            operation: "ampleness",
            surface: d.surface,
        }),
    }
}

pub fn is_ample(d: &Divisor) -> Result<bool> {
    is_very_ample(d)
}

/// Global generation on `X_3` / `X_4`, in the inequality form used by the
/// cohomology-concentration arguments: exceptional coefficients `<= 0` and
/// `a + b_i + b_j >= 0`.
pub fn is_globally_generated(d: &Divisor) -> Result<bool> {
    match d.surface.kind {
        SurfaceKind::BlowUp(3) | SurfaceKind::BlowUp(4) => blow_up_inequalities(d, 0, 0),
        _ => Err(Error::Unsupported {
            operation: "global generation",
            surface: d.surface,
        }),
    }
}

/// The twisting divisors `D` whose complements `H - D` must be effective for
/// the left and middle quiver terms to sit in first cohomology.
pub fn concentration_divisors(s: Surface) -> Result<Vec<Divisor>> {
    let rows: Vec<Vec<i64>> = match s.kind {
        SurfaceKind::BlowUp(3) => vec![
            vec![1, 0, 0, 0],
            vec![2, -1, -1, -1],
            vec![2, -1, -1, 0],
            vec![2, -1, 0, -1],
            vec![2, 0, -1, -1],
        ],
        SurfaceKind::BlowUp(4) => vec![
            vec![1, 0, 0, 0, 0],
            vec![2, 0, -1, -1, -1],
            vec![2, -1, 0, -1, -1],
            vec![2, -1, -1, 0, -1],
            vec![2, -1, -1, -1, 0],
            vec![2, -1, -1, -1, -1],
        ],
        _ => {
            return Err(Error::Unsupported {
                operation: "effectivity suite",
                surface: s,
            })
        }
    };
    rows.into_iter().map(|c| Divisor::new(s, c)).collect()
}

/// For each concentration divisor `D`, whether `H - D` is globally generated.
pub fn effectivity_suite(s: Surface, h: &Divisor) -> Result<Vec<(Divisor, bool)>> {
    let divisors = concentration_divisors(s)?;
    if h.surface != s {
        return Err(Error::SurfaceMismatch(s, h.surface));
    }
    if !is_very_ample(h)? {
        return Err(Error::NotAmple(h.to_string()));
    }
    divisors
        .into_iter()
        .map(|d| {
            let ok = is_globally_generated(&h.checked_sub(&d)?)?;
            Ok((d, ok))
        })
        .collect()
}

/// `3H + K_X`, the twist under which the dual of an Ulrich bundle on a
/// surface is again Ulrich.
pub fn ulrich_dual_twist(s: Surface, h: &Divisor) -> Result<Divisor> {
    if h.surface != s {
        return Err(Error::SurfaceMismatch(s, h.surface));
    }
    h.checked_scale(3)?.checked_add(&canonical_class(s))
}
