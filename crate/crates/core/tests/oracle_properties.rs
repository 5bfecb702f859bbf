use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use ulrich_core::oracle::{self, brute_force, brute_force_parallel, Definiteness, LinearConstraint, RationalMatrix};
use ulrich_core::quiver::{Quiver, TitsTarget};

fn matrix(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (rows, cols).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-4i64..=4, c), r))
}

fn symmetric() -> impl Strategy<Value = Vec<Vec<i64>>> {
    matrix(1..=6, 1..=6).prop_map(|m| {
        let n = m.len().min(m[0].len());
        (0..n)
            .map(|i| (0..n).map(|j| m[i.min(j)][i.max(j)]).collect())
            .collect()
    })
}

/// Low-rank symmetric matrices `B^T D B`, which exercise the semidefinite paths.
fn low_rank_symmetric() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (matrix(1..=3, 2..=5), proptest::collection::vec(-1i64..=1, 3)).prop_map(|(b, d)| {
        let n = b[0].len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..b.len()).map(|k| b[k][i] * d[k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn nullspace_vectors_annihilate(m in matrix(1..=4, 1..=6)) {
        let a = RationalMatrix::from_rows_i64(&m);
        let basis = oracle::nullspace(&a);
        prop_assert_eq!(basis.len() + oracle::rank(&a), a.cols());
        for v in &basis {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            let lead = v.iter().find(|x| !x.is_zero()).unwrap();
            prop_assert!(*lead > BigRational::zero());
        }
    }

    #[test]
    fn negation_mirrors_definiteness(m in prop_oneof![symmetric(), low_rank_symmetric()]) {
        let a = RationalMatrix::from_rows_i64(&m);
        let d = oracle::definiteness(&a).unwrap();
        prop_assert_eq!(oracle::definiteness(&a.neg()).unwrap(), d.mirror());
    }

    #[test]
    fn elimination_agrees_with_eigenvalue_signs(m in prop_oneof![symmetric(), low_rank_symmetric()]) {
        let a = RationalMatrix::from_rows_i64(&m);
        prop_assert_eq!(oracle::inertia(&a).unwrap(), oracle::eigen_sign_inertia(&a).unwrap());
    }

    #[test]
    fn brute_force_is_monotone_in_the_box(
        r in 1i64..=3,
        lo in proptest::collection::vec(0i64..=2, 5),
        grow in proptest::collection::vec(0i64..=3, 5),
        inner in proptest::collection::vec(0i64..=3, 5),
        target in prop_oneof![Just(TitsTarget::Negative), Just(TitsTarget::Exactly(0)), Just(TitsTarget::Exactly(1))],
    ) {
        let q = Quiver::k32().euler_matrix();
        let linear = [
            LinearConstraint::new(vec![-1, -1, -1, 2, 2], r),
            LinearConstraint::new(vec![2, 2, 2, -3, -3], 0),
        ];
        let small: Vec<(i64, i64)> = lo.iter().zip(&inner).map(|(&l, &w)| (l, l + w)).collect();
        let big: Vec<(i64, i64)> = small.iter().zip(&grow).map(|(&(l, h), &g)| ((l - g).max(0), h + g)).collect();
        let a = brute_force(&linear, &q, target, &small).unwrap();
        let b = brute_force(&linear, &q, target, &big).unwrap();
        prop_assert!(a.iter().all(|v| b.contains(v)));
        prop_assert_eq!(brute_force_parallel(&linear, &q, target, &big, 3).unwrap(), b);
    }
}

#[test]
fn definiteness_examples() {
    let cases: [(Vec<Vec<i64>>, Definiteness); 4] = [
        (vec![vec![1, 0], vec![0, 1]], Definiteness::PositiveDefinite),
        (vec![vec![1, 0], vec![0, -1]], Definiteness::Indefinite),
        (vec![vec![2, -3], vec![-3, 2]], Definiteness::Indefinite),
        (vec![vec![-2, 1], vec![1, -2]], Definiteness::NegativeDefinite),
    ];
    for (m, want) in cases {
        assert_eq!(oracle::definiteness(&RationalMatrix::from_rows_i64(&m)).unwrap(), want);
    }
}
