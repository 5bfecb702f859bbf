//! Shared fixtures for the benchmarks.

use ulrich_core::oracle::LinearConstraint;
use ulrich_core::{Divisor, Surface, UlrichSystem};

/// A named polarization used across benchmarks.
pub struct Fixture {
    pub name: &'static str,
    pub surface: Surface,
    pub h: Divisor,
}

fn fixture(name: &'static str, surface: Surface, coeffs: &[i64]) -> Fixture {
    Fixture {
        name,
        surface,
        h: Divisor::new(surface, coeffs.to_vec()).expect("fixture coefficients match the Picard rank"),
    }
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        fixture("p2-cubic", Surface::P2, &[3]),
        fixture("quadric-2-3", Surface::P1XP1, &[2, 3]),
        fixture("x3-anticanonical", Surface::X3, &[3, -1, -1, -1]),
        fixture("x3-4.-2.-1.-1", Surface::X3, &[4, -2, -1, -1]),
        fixture("x4-anticanonical", Surface::X4, &[3, -1, -1, -1, -1]),
    ]
}

pub fn system(f: &Fixture, r: i64) -> UlrichSystem {
    UlrichSystem::build(f.surface, &f.h, r).expect("fixtures are very ample")
}

/// The rank and chi constraints in the oracle's format.
pub fn linear(sys: &UlrichSystem) -> Vec<LinearConstraint> {
    vec![
        LinearConstraint::new(sys.rank_form().to_vec(), sys.rank()),
        LinearConstraint::new(sys.chi_form().to_vec(), 0),
    ]
}
