use std::collections::HashSet;

use proptest::prelude::*;
use ulrich_core::oracle::{self, RationalMatrix};
use ulrich_core::quiver::{DiagramType, DimVector, Quiver};

fn catalog() -> Vec<Quiver> {
    vec![Quiver::k3(), Quiver::s4(), Quiver::k32(), Quiver::k51()]
}

fn quiver_and_vectors() -> impl Strategy<Value = (Quiver, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (0usize..4).prop_flat_map(|i| {
        let q = catalog()[i].clone();
        let n = q.vertex_count();
        let v = || proptest::collection::vec(-50i64..=50, n);
        (Just(q), v(), v(), v())
    })
}

proptest! {
    #[test]
    fn euler_form_is_bilinear((q, a, a2, b) in quiver_and_vectors()) {
        let sum: Vec<i64> = a.iter().zip(&a2).map(|(x, y)| x + y).collect();
        let (a, a2, b, sum) = (DimVector::new(a), DimVector::new(a2), DimVector::new(b), DimVector::new(sum));
        prop_assert_eq!(
            q.euler_form(&sum, &b).unwrap(),
            q.euler_form(&a, &b).unwrap() + q.euler_form(&a2, &b).unwrap()
        );
        prop_assert_eq!(
            q.euler_form(&b, &sum).unwrap(),
            q.euler_form(&b, &a).unwrap() + q.euler_form(&b, &a2).unwrap()
        );
    }

    #[test]
    fn tits_form_is_quadratic((q, d, _, _) in quiver_and_vectors(), n in -7i64..=7) {
        let scaled = DimVector::new(d.iter().map(|x| n * x).collect());
        prop_assert_eq!(q.tits(&scaled).unwrap(), n * n * q.tits(&DimVector::new(d)).unwrap());
    }
}

type Closed = fn(&[i64], &[i64]) -> i64;

fn k3_closed(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] + a[1] * b[1] - 3 * a[0] * b[1]
}

fn s4_closed(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - 2 * a[0] * b[1] - 2 * a[0] * b[2]
}

fn k32_closed(a: &[i64], b: &[i64]) -> i64 {
    let dot: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot - (a[0] + a[1] + a[2]) * (b[3] + b[4])
}

fn k51_closed(a: &[i64], b: &[i64]) -> i64 {
    let dot: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot - (a[0] + a[1] + a[2] + a[3] + a[4]) * b[5]
}

fn grid(n: usize) -> Vec<DimVector> {
    let mut out = Vec::new();
    let mut c = vec![-3i64; n];
    loop {
        out.push(DimVector::new(c.clone()));
        let mut i = 0;
        while i < n && c[i] == 3 {
            c[i] = -3;
            i += 1;
        }
        if i == n {
            return out;
        }
        c[i] += 1;
    }
}

#[test]
fn catalog_matches_closed_forms_on_grid() {
    let cases: [(Quiver, Closed); 4] = [
        (Quiver::k3(), k3_closed),
        (Quiver::s4(), s4_closed),
        (Quiver::k32(), k32_closed),
        (Quiver::k51(), k51_closed),
    ];
    for (q, closed) in cases {
        let n = q.vertex_count();
        let g = grid(n);
        // All pairs where that is cheap; otherwise every grid point against
        // every unit vector in both slots plus the diagonal, which by
        // bilinearity pins the form on the whole grid.
        let partners: Vec<DimVector> = if n <= 3 {
            g.clone()
        } else {
            (0..n).map(|i| DimVector::unit(n, i)).collect()
        };
        for a in &g {
            for b in &partners {
                assert_eq!(
                    q.euler_form(a, b).unwrap(),
                    closed(a.entries(), b.entries()),
                    "{q} {a} {b}"
                );
                assert_eq!(
                    q.euler_form(b, a).unwrap(),
                    closed(b.entries(), a.entries()),
                    "{q} {b} {a}"
                );
            }
            assert_eq!(q.tits(a).unwrap(), closed(a.entries(), a.entries()), "{q} {a}");
        }
    }
}

#[test]
fn catalog_quivers_are_hyperbolic() {
    for q in catalog() {
        assert_eq!(q.diagram_type().unwrap(), DiagramType::Indefinite, "{q}");
        assert!(q.is_hyperbolic().unwrap(), "{q}");
    }
}

fn dynkin_family() -> Vec<Quiver> {
    let mut out: Vec<Quiver> = (1..=8).map(Quiver::a_n).collect();
    out.extend((4..=8).map(Quiver::d_n));
    out.extend((6..=8).map(Quiver::e_n));
    out
}

fn extended_family() -> Vec<Quiver> {
    let mut out: Vec<Quiver> = (1..=7).map(Quiver::extended_a).collect();
    out.extend((4..=7).map(Quiver::extended_d));
    out.extend([6, 7].map(Quiver::extended_e));
    out
}

#[test]
fn dynkin_and_extended_diagrams_are_not_hyperbolic() {
    for q in dynkin_family() {
        assert_eq!(q.diagram_type().unwrap(), DiagramType::Finite, "{q}");
        assert!(!q.is_hyperbolic().unwrap(), "{q}");
    }
    for q in extended_family() {
        assert!(q.vertex_count() <= 8);
        assert_eq!(q.diagram_type().unwrap(), DiagramType::Affine, "{q}");
        assert!(!q.is_hyperbolic().unwrap(), "{q}");
    }
}

#[test]
fn wild_kronecker_quivers_are_hyperbolic() {
    for m in 3..=6 {
        assert!(Quiver::kronecker(m).is_hyperbolic().unwrap());
    }
    // A triangle with a double edge contains the affine Kronecker but is
    // itself indefinite, so its proper subdiagrams decide hyperbolicity.
    let q = Quiver::new(3, vec![(0, 1), (0, 1), (1, 2), (0, 2)]).unwrap();
    assert_eq!(q.diagram_type().unwrap(), DiagramType::Indefinite);
    assert!(q.is_hyperbolic().unwrap());
}

fn oracle_type(q: &Quiver) -> DiagramType {
    let m = RationalMatrix::from_rows_i64(&q.symmetrized_matrix());
    let i = oracle::eigen_sign_inertia(&m).unwrap();
    let n = q.vertex_count();
    if i.positive == n {
        DiagramType::Finite
    } else if i.positive == n - 1 && i.zero == 1 {
        DiagramType::Affine
    } else {
        DiagramType::Indefinite
    }
}

/// Pair multiplicities of a multigraph on `n` vertices, in `(i, j)`, `i < j` order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// For each vertex permutation, where each pair position is sent.
fn pair_maps(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let p = pairs(n);
    let idx = |i: usize, j: usize| p.iter().position(|&e| e == (i.min(j), i.max(j))).unwrap();
    perms
        .iter()
        .map(|perm| p.iter().map(|&(i, j)| idx(perm[i], perm[j])).collect())
        .collect()
}

fn canonical(mult: &[u8], maps: &[Vec<usize>]) -> [u8; 10] {
    let mut best = [u8::MAX; 10];
    for map in maps {
        let mut cand = [0u8; 10];
        for (k, &m) in map.iter().enumerate() {
            cand[k] = mult[m];
        }
        if cand < best {
            best = cand;
        }
    }
    best
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every connected quiver on at most five vertices with at most four arrows
/// between any two vertices, one per isomorphism class of the underlying
/// multigraph (both classifications depend only on that class).
#[test]
fn diagram_type_agrees_with_eigenvalue_oracle() {
    let mut checked = 0usize;
    for n in 1..=5usize {
        let p = pairs(n);
        let maps = pair_maps(n, &permutations(n));
        let mut seen: HashSet<[u8; 10]> = HashSet::new();
        let mut mult = vec![0u8; p.len()];
        loop {
            let mut deg = vec![0u32; n];
            for (k, &(i, j)) in p.iter().enumerate() {
                deg[i] += u32::from(mult[k]);
                deg[j] += u32::from(mult[k]);
            }
            // Some relabeling sorts the degrees, so this filter loses no class.
            if deg.windows(2).all(|w| w[0] >= w[1]) {
                let arrows: Vec<(usize, usize)> = p
                    .iter()
                    .zip(&mult)
                    .flat_map(|(&e, &m)| std::iter::repeat_n(e, m as usize))
                    .collect();
                let q = Quiver::new(n, arrows).unwrap();
                if q.is_connected() && seen.insert(canonical(&mult, &maps)) {
                    assert_eq!(q.diagram_type().unwrap(), oracle_type(&q), "{:?}", q.arrows());
                    checked += 1;
                }
            }
            let mut k = 0;
            while k < mult.len() && mult[k] == 4 {
                mult[k] = 0;
                k += 1;
            }
            if k == mult.len() {
                break;
            }
            mult[k] += 1;
        }
    }
    assert!(checked > 80_000, "only {checked} classes checked");
}
