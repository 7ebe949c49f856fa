#![allow(dead_code)]

use std::collections::BTreeMap;

use fracpow::{FracSeries, MSpec, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use fracpow::rational::q;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse series with exponents in `(1/den)·Z≥0`, small integer coefficients.
pub fn series(rng: &mut ChaCha8Rng, den: i64, cutoff: i64, constant: Option<i64>) -> FracSeries {
    let mut terms = Vec::new();
    for k in 1..=cutoff * den {
        if rng.gen_bool(0.3) {
            terms.push((q(k, den), q(rng.gen_range(-4..=4), 1)));
        }
    }
    let c = constant.unwrap_or_else(|| rng.gen_range(-3..=3));
    terms.push((q(0, 1), q(c, 1)));
    FracSeries::from_terms(terms, q(cutoff, 1)).unwrap()
}

/// A series with positive order.
pub fn tail(rng: &mut ChaCha8Rng, den: i64, cutoff: i64) -> FracSeries {
    series(rng, den, cutoff, Some(0))
}

pub fn random_mspec(
    rng: &mut ChaCha8Rng,
    b0: std::ops::RangeInclusive<u64>,
    max_extra: usize,
) -> MSpec {
    let b = rng.gen_range(b0);
    let extra = rng.gen_range(1..=max_extra);
    let mut pairs = vec![(b, rng.gen_range(1..=3))];
    while pairs.len() < extra + 1 {
        let c = rng.gen_range(b + 1..=3 * b);
        if pairs.iter().all(|&(x, _)| x != c) {
            pairs.push((c, rng.gen_range(1..=3)));
        }
    }
    pairs.sort_unstable();
    MSpec::new(pairs).unwrap()
}

pub fn random_exponents(rng: &mut ChaCha8Rng, max_d: u64, mag: i64) -> BTreeMap<u64, Rational> {
    let mut out = BTreeMap::new();
    for d in 1..=max_d {
        if rng.gen_bool(0.4) {
            let v = rng.gen_range(-mag..=mag);
            if v != 0 {
                out.insert(d, q(v, 1));
            }
        }
    }
    out
}
