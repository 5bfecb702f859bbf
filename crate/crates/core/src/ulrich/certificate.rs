use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::system::UlrichSystem;
use crate::error::{Error, Result};
use crate::oracle::{self, Definiteness, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateClass {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    /// Semidefinite with a nontrivial radical, or identically zero.
    Degenerate,
}

impl From<Definiteness> for CertificateClass {
    fn from(d: Definiteness) -> Self {
        match d {
            Definiteness::PositiveDefinite => CertificateClass::PositiveDefinite,
            Definiteness::NegativeDefinite => CertificateClass::NegativeDefinite,
            Definiteness::Indefinite => CertificateClass::Indefinite,
            _ => CertificateClass::Degenerate,
        }
    }
}

/// The Tits form restricted to the directions along which both linear
/// constraints are constant.
///
/// If the restriction is positive definite, every level set of the Tits form
/// meets each affine fibre of the linear constraints in a bounded set, so
/// there are finitely many integer candidates for every rank and target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessCertificate {
    pub class: CertificateClass,
    /// `N^T (E + E^T) N`, twice the Gram matrix of the restricted Tits form.
    pub matrix: Vec<Vec<i64>>,
    /// Columns of `N`: a primitive integer basis of the joint kernel.
    #[serde(skip)]
    pub basis: Vec<Vec<i64>>,
}

impl FinitenessCertificate {
    pub fn is_positive_definite(&self) -> bool {
        self.class == CertificateClass::PositiveDefinite
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("finiteness certificate"))
}

pub fn finiteness_certificate(sys: &UlrichSystem) -> Result<FinitenessCertificate> {
    let forms = RationalMatrix::from_rows_i64(&[sys.rank_form(), sys.chi_form()]);
    let basis: Vec<Vec<i64>> = oracle::integer_nullspace(&forms)
        .iter()
        .map(|v| v.iter().map(to_i64).collect())
        .collect::<Result<_>>()?;
    if basis.is_empty() {
        // No direction to escape along: the candidate set is at most a point.
        return Ok(FinitenessCertificate {
            class: CertificateClass::PositiveDefinite,
            matrix: Vec::new(),
            basis,
        });
    }
    let sym = RationalMatrix::from_rows_i64(&sys.quiver().symmetrized_matrix());
    let n = RationalMatrix::from_rows_i64(&basis).transpose();
    let restricted = n.transpose().mul(&sym)?.mul(&n)?;
    let class = oracle::definiteness(&restricted)?.into();
    let matrix = restricted
        .to_integer_rows()
        .ok_or_else(|| Error::Internal("restricted form is not integral".into()))?
        .iter()
        .map(|row| row.iter().map(to_i64).collect())
        .collect::<Result<_>>()?;
    Ok(FinitenessCertificate { class, matrix, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Divisor, Surface};

    fn cert(s: Surface, h: &[i64]) -> FinitenessCertificate {
        let h = Divisor::new(s, h.to_vec()).unwrap();
        finiteness_certificate(&UlrichSystem::build_unchecked(s, &h, 1).unwrap()).unwrap()
    }

    #[test]
    fn quadric_unit_polarization() {
        let c = cert(Surface::P1XP1, &[1, 1]);
        assert_eq!(c.class, CertificateClass::PositiveDefinite);
        assert_eq!(c.basis, vec![vec![0, 1, -1]]);
        // Twice the Tits value 2 of (0, 1, -1).
        assert_eq!(c.matrix, vec![vec![4]]);
    }

    #[test]
    fn projective_plane_is_vacuous() {
        let c = cert(Surface::P2, &[3]);
        assert_eq!(c.class, CertificateClass::PositiveDefinite);
        assert!(c.matrix.is_empty());
    }

    #[test]
    fn cubic_ample_and_not() {
        assert!(cert(Surface::X3, &[3, -1, -1, -1]).is_positive_definite());
        assert!(!cert(Surface::X3, &[1, -1, -1, -1]).is_positive_definite());
        assert!(cert(Surface::X4, &[3, -1, -1, -1, -1]).is_positive_definite());
    }
}
