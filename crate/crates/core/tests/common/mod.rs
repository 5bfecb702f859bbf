#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ulrich_core::lattice::{self, Divisor, Surface};

/// Every very ample divisor on `s` with all coefficients in `[-m, m]`.
pub fn ample_scan(s: Surface, m: i64) -> Vec<Divisor> {
    let n = s.picard_rank();
    let mut out = Vec::new();
    let mut c = vec![-m; n];
    loop {
        let d = Divisor::new(s, c.clone()).unwrap();
        if lattice::is_very_ample(&d).unwrap() {
            out.push(d);
        }
        let mut i = 0;
        while i < n && c[i] == m {
            c[i] = -m;
            i += 1;
        }
        if i == n {
            return out;
        }
        c[i] += 1;
    }
}

/// A random very ample divisor with coefficients of absolute value at most `m`.
pub fn random_ample(rng: &mut ChaCha8Rng, s: Surface, m: i64) -> Divisor {
    loop {
        let c: Vec<i64> = (0..s.picard_rank()).map(|_| rng.gen_range(-m..=m)).collect();
        let d = Divisor::new(s, c).unwrap();
        if lattice::is_very_ample(&d).unwrap() {
            return d;
        }
    }
}

pub fn div(s: Surface, c: &[i64]) -> Divisor {
    Divisor::new(s, c.to_vec()).unwrap()
}
