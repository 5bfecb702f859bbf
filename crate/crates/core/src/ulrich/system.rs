use crate::error::{Error, Result};
use crate::lattice::{self, Divisor, Surface, SurfaceKind};
use crate::quiver::{DimVector, Quiver};

/// The K-theory class attached to one quiver vertex: `sum k * O(L + H)`
/// over its terms, placed on the kernel side (`sign = -1`) or the cokernel
/// side (`sign = +1`) of the resolution of the bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub label: &'static str,
    pub sign: i64,
    /// `(multiplicity, L)` pairs.
    pub terms: Vec<(i64, Divisor)>,
}

impl VertexClass {
    pub fn rank(&self) -> i64 {
        self.terms.iter().map(|(k, _)| k).sum()
    }

    /// `chi(V(-2H))`, i.e. `sum k * chi(O(L - H))`.
    pub fn twisted_chi(&self, h: &Divisor) -> Result<i64> {
        let mut acc: i64 = 0;
        for (k, l) in &self.terms {
            let c = lattice::chi(&l.checked_sub(h)?)?;
            acc = k
                .checked_mul(c)
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow("vertex Euler characteristic"))?;
        }
        Ok(acc)
    }
}

/// The linear and quadratic constraints on the dimension vector of a rank
/// `r` Ulrich bundle for one polarized surface.
///
/// Vertex order: `(a, b)` on P2, `(gamma, delta, tau)` on P1xP1,
/// `(alpha, beta, gamma, delta, epsilon)` on X3 and
/// `(alpha, beta, gamma, delta, epsilon, zeta)` on X4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlrichSystem {
    surface: Surface,
    polarization: Divisor,
    rank: i64,
    quiver: Quiver,
    vertices: Vec<VertexClass>,
    rank_form: Vec<i64>,
    chi_form: Vec<i64>,
    chi_scale: i64,
}

fn div(s: Surface, coeffs: &[i64]) -> Divisor {
    Divisor::new(s, coeffs.to_vec()).expect("fixed-shape divisor")
}

fn vertex(label: &'static str, sign: i64, terms: Vec<(i64, Divisor)>) -> VertexClass {
    VertexClass { label, sign, terms }
}

/// The fixed quiver and vertex classes of each supported surface.
pub fn vertex_classes(s: Surface) -> Result<(Quiver, Vec<VertexClass>)> {
    let d = |c: &[i64]| div(s, c);
    Ok(match s.kind() {
        SurfaceKind::ProjectivePlane => (
            Quiver::k3(),
            vec![
                vertex("a", -1, vec![(1, d(&[-2]))]),
                vertex("b", 1, vec![(1, d(&[-1]))]),
            ],
        ),
        SurfaceKind::QuadricProduct => (
            Quiver::s4(),
            vec![
                vertex("gamma", -1, vec![(1, d(&[-1, -1]))]),
                vertex("delta", 1, vec![(1, d(&[-1, 0]))]),
                vertex("tau", 1, vec![(1, d(&[0, -1]))]),
            ],
        ),
        SurfaceKind::BlowUp(3) => (
            Quiver::k32(),
            vec![
                vertex("alpha", -1, vec![(1, d(&[-1, 1, 0, 0]))]),
                vertex("beta", -1, vec![(1, d(&[-1, 0, 1, 0]))]),
                vertex("gamma", -1, vec![(1, d(&[-1, 0, 0, 1]))]),
                vertex("delta", 1, vec![(3, d(&[0, 0, 0, 0])), (-1, d(&[1, 0, 0, 0]))]),
                vertex("epsilon", 1, vec![(3, d(&[0, 0, 0, 0])), (-1, d(&[2, -1, -1, -1]))]),
            ],
        ),
        SurfaceKind::BlowUp(4) => (
            Quiver::k51(),
            vec![
                vertex("alpha", -1, vec![(1, d(&[-1, 0, 0, 0, 1]))]),
                vertex("beta", -1, vec![(1, d(&[-1, 0, 0, 1, 0]))]),
                vertex("gamma", -1, vec![(1, d(&[-1, 0, 1, 0, 0]))]),
                vertex("delta", -1, vec![(1, d(&[-1, 1, 0, 0, 0]))]),
                vertex("epsilon", -1, vec![(1, d(&[-2, 1, 1, 1, 1]))]),
                vertex(
                    "zeta",
                    1,
                    vec![
                        (5, d(&[0, 0, 0, 0, 0])),
                        (-1, d(&[1, 0, 0, 0, 0])),
                        (-1, d(&[2, -1, -1, -1, -1])),
                    ],
                ),
            ],
        ),
        SurfaceKind::BlowUp(_) => {
            return Err(Error::Unsupported {
                operation: "Ulrich constraint systems",
                surface: s,
            })
        }
    })
}

impl UlrichSystem {
    /// Requires `h` very ample and `r >= 1`.
    pub fn build(s: Surface, h: &Divisor, r: i64) -> Result<Self> {
        if h.surface() != s {
            return Err(Error::SurfaceMismatch(s, h.surface()));
        }
        if !lattice::is_very_ample(h)? {
            return Err(Error::NotAmple(h.to_string()));
        }
        UlrichSystem::build_unchecked(s, h, r)
    }

    /// Like [`UlrichSystem::build`] but accepts polarizations that are not ample.
    pub fn build_unchecked(s: Surface, h: &Divisor, r: i64) -> Result<Self> {
        if h.surface() != s {
            return Err(Error::SurfaceMismatch(s, h.surface()));
        }
        if r < 1 {
            return Err(Error::InvalidArgument(format!("rank must be positive, got {r}")));
        }
        let (quiver, vertices) = vertex_classes(s)?;
        let rank_form = vertices.iter().map(|v| v.sign * v.rank()).collect();
        let chi_form = vertices
            .iter()
            .map(|v| {
                v.twisted_chi(h)?
                    .checked_mul(-v.sign)
                    .ok_or(Error::Overflow("chi form"))
            })
            .collect::<Result<_>>()?;
        Ok(UlrichSystem {
            surface: s,
            polarization: h.clone(),
            rank: r,
            quiver,
            vertices,
            rank_form,
            chi_form,
            chi_scale: 1,
        })
    }

    /// The same constraints for another rank.
    pub fn with_rank(&self, r: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument(format!("rank must be positive, got {r}")));
        }
        Ok(UlrichSystem {
            rank: r,
            ..self.clone()
        })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn polarization(&self) -> &Divisor {
        &self.polarization
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vertices(&self) -> &[VertexClass] {
        &self.vertices
    }

    pub fn vertex_labels(&self) -> Vec<&'static str> {
        self.vertices.iter().map(|v| v.label).collect()
    }

    pub fn dim(&self) -> usize {
        self.rank_form.len()
    }

    /// `rank_form . d = r`.
    pub fn rank_form(&self) -> &[i64] {
        &self.rank_form
    }

    /// `chi_form . d = 0`.
    pub fn chi_form(&self) -> &[i64] {
        &self.chi_form
    }

    /// Factor by which `chi_form` was scaled to clear denominators. The
    /// coefficients are Euler characteristics of line bundles, so this is 1.
    pub fn chi_scale(&self) -> i64 {
        self.chi_scale
    }

    pub fn tits(&self, d: &DimVector) -> Result<i64> {
        self.quiver.tits(d)
    }

    fn dot(form: &[i64], d: &DimVector) -> Result<i64> {
        if d.len() != form.len() {
            return Err(Error::LengthMismatch {
                expected: form.len(),
                got: d.len(),
            });
        }
        form.iter()
            .zip(d.entries())
            .try_fold(0i64, |acc, (a, b)| a.checked_mul(*b).and_then(|t| acc.checked_add(t)))
            .ok_or(Error::Overflow("linear form"))
    }

    /// Whether `d` meets both linear constraints exactly.
    pub fn satisfies_linear(&self, d: &DimVector) -> Result<bool> {
        Ok(Self::dot(&self.rank_form, d)? == self.rank && Self::dot(&self.chi_form, d)? == 0)
    }
}
