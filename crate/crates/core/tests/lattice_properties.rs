mod common;

use common::{ample_scan, div};
use proptest::prelude::*;
use ulrich_core::lattice::{self, canonical_class, chi, intersect, Divisor, Surface};

fn surfaces() -> impl Strategy<Value = Surface> {
    prop_oneof![
        Just(Surface::P2),
        Just(Surface::P1XP1),
        Just(Surface::X3),
        Just(Surface::X4),
        (1u8..=8).prop_map(|d| Surface::blow_up(d).unwrap()),
    ]
}

fn divisor_on(s: Surface, m: i64) -> impl Strategy<Value = Divisor> {
    proptest::collection::vec(-m..=m, s.picard_rank()).prop_map(move |c| Divisor::new(s, c).unwrap())
}

fn two_divisors() -> impl Strategy<Value = (Divisor, Divisor)> {
    surfaces().prop_flat_map(|s| (divisor_on(s, 20), divisor_on(s, 20)))
}

proptest! {
    #[test]
    fn intersection_is_symmetric_and_scales((d1, d2) in two_divisors(), n in -6i64..=6) {
        prop_assert_eq!(intersect(&d1, &d2).unwrap(), intersect(&d2, &d1).unwrap());
        let scaled = d1.checked_scale(n).unwrap();
        prop_assert_eq!(intersect(&scaled, &d2).unwrap(), n * intersect(&d1, &d2).unwrap());
    }

    #[test]
    fn intersection_is_additive((d1, d2) in two_divisors()) {
        let sum = d1.checked_add(&d2).unwrap();
        prop_assert_eq!(
            intersect(&sum, &sum).unwrap(),
            intersect(&d1, &d1).unwrap() + 2 * intersect(&d1, &d2).unwrap() + intersect(&d2, &d2).unwrap()
        );
    }

    #[test]
    fn serre_duality_on_blow_ups(d in (1u8..=8).prop_flat_map(|k| divisor_on(Surface::blow_up(k).unwrap(), 30))) {
        let k = canonical_class(d.surface());
        prop_assert_eq!(chi(&d).unwrap(), chi(&k.checked_sub(&d).unwrap()).unwrap());
    }

    #[test]
    fn dual_twist_is_three_h_plus_k(d in surfaces().prop_flat_map(|s| divisor_on(s, 20))) {
        let s = d.surface();
        let twist = lattice::ulrich_dual_twist(s, &d).unwrap();
        let want = d.checked_scale(3).unwrap().checked_add(&canonical_class(s)).unwrap();
        prop_assert_eq!(twist, want);
    }
}

#[test]
fn structure_sheaf_has_chi_one() {
    for s in [Surface::P2, Surface::P1XP1, Surface::X3, Surface::X4] {
        assert_eq!(chi(&Divisor::zero(s)).unwrap(), 1, "{s}");
    }
    for d in 1..=8 {
        let s = Surface::blow_up(d).unwrap();
        assert_eq!(chi(&Divisor::zero(s)).unwrap(), 1, "{s}");
    }
}

#[test]
fn riemann_roch_on_the_plane_and_quadric() {
    for a in -10i64..=10 {
        assert_eq!(chi(&div(Surface::P2, &[a])).unwrap(), (a + 1) * (a + 2) / 2);
        for b in -10i64..=10 {
            assert_eq!(chi(&div(Surface::P1XP1, &[a, b])).unwrap(), (a + 1) * (b + 1));
        }
    }
}

#[test]
fn ample_polarizations_are_globally_generated_with_positive_degree() {
    for s in [Surface::X3, Surface::X4] {
        let scan = ample_scan(s, 8);
        assert!(!scan.is_empty());
        for h in scan {
            assert!(lattice::is_globally_generated(&h).unwrap(), "{s} {h}");
            assert!(intersect(&h, &h).unwrap() > 0, "{s} {h}");
            let suite = lattice::effectivity_suite(s, &h).unwrap();
            assert!(suite.iter().all(|(_, ok)| *ok), "{s} {h}");
        }
    }
}

#[test]
fn ampleness_queries_outside_the_criteria_fail() {
    let s = Surface::blow_up(5).unwrap();
    assert!(lattice::is_very_ample(&Divisor::zero(s)).is_err());
    assert!(lattice::is_globally_generated(&Divisor::zero(Surface::P2)).is_err());
}
