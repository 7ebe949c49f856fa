//! Alternating sums over `θ`-monomial quotients of an index.
//!
//! Both the power-series criterion and the closed form of the product
//! exponents have the shape
//!
//! ```text
//! Σ_k (−1)^k Σ_{i_1…i_k} ν_{i_1}⋯ν_{i_k} m_{bλ θ_{i_1}^{-1}⋯θ_{i_k}^{-1}}
//! ```
//!
//! Terms commute, so instead of walking index sequences the walk merges
//! equal quotients: values are visited from the largest down, each once,
//! carrying the total signed weight of every path that reaches it.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::arith::{in_nprime, in_qbprime};
use crate::error::{domain, Result};
use crate::lattice::LatticeSpec;
use crate::mspec::MSpec;
use crate::rational::Rational;

/// `m_x` with the convention `m_x = 0` unless `x` is an integer in `N′`.
fn lookup<'a>(mexps: &'a BTreeMap<u64, Rational>, x: &Rational) -> Option<&'a Rational> {
    if !x.is_integer() {
        return None;
    }
    mexps.get(&x.to_u64()?)
}

fn shares_only_b_primes(den: &BigInt, b: u64) -> bool {
    let b = BigInt::from(b);
    let mut d = den.clone();
    loop {
        let g = num_integer::Integer::gcd(&d, &b);
        if g == BigInt::from(1) {
            return d == BigInt::from(1);
        }
        d /= g;
    }
}

fn alternating_sum(
    m: &MSpec,
    mexps: &BTreeMap<u64, Rational>,
    start: Rational,
    weight: Rational,
) -> Rational {
    let mexps: BTreeMap<u64, Rational> = mexps
        .iter()
        .filter(|(&d, v)| !v.is_zero() && in_nprime(d, m))
        .map(|(&d, v)| (d, v.clone()))
        .collect();
    let Some(&floor) = mexps.keys().next() else {
        return Rational::zero();
    };
    let floor = Rational::from(floor);
    let steps: Vec<(Rational, Rational)> = m
        .thetas()
        .into_iter()
        .zip(m.nus())
        .map(|(t, nu)| (t.recip().expect("theta > 1"), -nu))
        .collect();
    let mut pending: BTreeMap<Rational, Rational> = BTreeMap::from([(start, weight)]);
    let mut total = Rational::zero();
    while let Some((x, w)) = pending.pop_last() {
        if w.is_zero() {
            continue;
        }
        if let Some(mx) = lookup(&mexps, &x) {
            total += &w * mx;
        }
        for (inv, neg_nu) in &steps {
            let y = &x * inv;
            if y < floor || !shares_only_b_primes(y.denom(), m.b()) {
                continue;
            }
            *pending.entry(y).or_default() += &w * neg_nu;
        }
    }
    total
}

fn in_qb_minus_n(lambda: &Rational, m: &MSpec) -> bool {
    let in_n = lambda.is_integer() && lambda.to_u64().is_some_and(|n| in_nprime(n, m));
    in_qbprime(lambda, m) && !in_n
}

/// The power-series criterion evaluated at `λ ∈ Q_b′ − N′`. The solution
/// is a power series iff this vanishes at every such `λ`; it equals `e·g_λ`.
pub fn criterion_t3(
    m: &MSpec,
    mexps: &BTreeMap<u64, Rational>,
    lambda: &Rational,
) -> Result<Rational> {
    if !in_qb_minus_n(lambda, m) {
        return domain(format!("{lambda} is not in Q_b' - N'"));
    }
    Ok(alternating_sum(
        m,
        mexps,
        lambda * Rational::from(m.b()),
        Rational::one(),
    ))
}

/// The alternating sum `(1/e) Σ_k (−1)^k Σ ν⋯ν m_{bdθ^{-1}⋯}` at any
/// positive `d`, without the `d ∈ N′` convention. It solves
/// `g_d + Σ ν_i g_{d/θ_i} = m_{bd}/e` for every `d`.
pub fn gd_raw(m: &MSpec, mexps: &BTreeMap<u64, Rational>, d: &Rational) -> Result<Rational> {
    if !d.is_positive() {
        return domain(format!("index {d} must be positive"));
    }
    let start = d * Rational::from(m.b());
    let weight = Rational::from(m.e()).recip()?;
    Ok(alternating_sum(m, mexps, start, weight))
}

/// Exponent `g_d` of `(1 − x^d)` in the power-series solution, with
/// `g_d = 0` for `d ∉ N′`.
pub fn gd_formula(m: &MSpec, mexps: &BTreeMap<u64, Rational>, d: &Rational) -> Result<Rational> {
    if !d.is_positive() {
        return domain(format!("index {d} must be positive"));
    }
    match d.to_u64() {
        Some(n) if in_nprime(n, m) => gd_raw(m, mexps, d),
        _ => Ok(Rational::zero()),
    }
}

/// Every `λ ∈ Q_b′ − N′` with `λ ≤ bound` where the criterion is nonzero.
///
/// A nonzero value needs some quotient `bλ θ^{-1}⋯` to land on the support
/// of `mexps`, so only the points `s·μ/b` (`s` in the support, `μ` a
/// θ-monomial) are candidates.
pub fn t3_scan(
    m: &MSpec,
    mexps: &BTreeMap<u64, Rational>,
    bound: &Rational,
) -> Result<Vec<(Rational, Rational)>> {
    let spec = LatticeSpec::from_mspec(m);
    let b = Rational::from(m.b());
    let top = bound * &b;
    let mut candidates = BTreeSet::new();
    for (&s, v) in mexps {
        if v.is_zero() || !in_nprime(s, m) {
            continue;
        }
        let s = Rational::from(s);
        if s > top {
            continue;
        }
        for mu in spec.monomials_below(&(&top / &s)) {
            candidates.insert(&s * mu / &b);
        }
    }
    let mut out = Vec::new();
    for lambda in candidates {
        if !in_qb_minus_n(&lambda, m) {
            continue;
        }
        let v = criterion_t3(m, mexps, &lambda)?;
        if !v.is_zero() {
            out.push((lambda, v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn mx(pairs: &[(u64, i64)]) -> BTreeMap<u64, Rational> {
        pairs.iter().map(|&(d, v)| (d, q(v, 1))).collect()
    }

    #[test]
    fn zero_exponents_give_zero() {
        let m: MSpec = "2:1,3:1".parse().unwrap();
        assert!(criterion_t3(&m, &BTreeMap::new(), &q(1, 2))
            .unwrap()
            .is_zero());
        assert!(gd_formula(&m, &BTreeMap::new(), &q(4, 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn ruzsa_case_vanishes() {
        let m: MSpec = "2:1,4:1".parse().unwrap();
        let h = mx(&[(2, -1)]);
        assert!(criterion_t3(&m, &h, &q(1, 2)).unwrap().is_zero());
        assert!(t3_scan(&m, &h, &q(64, 1)).unwrap().is_empty());
    }

    #[test]
    fn single_surviving_term() {
        // b = 6, θ = 7/6: the start index 6·(1/2) = 3 carries the only mass
        // and every quotient 3·(6/7)^k picks up a 7 in the denominator.
        let m: MSpec = "6:1,7:1".parse().unwrap();
        let h = mx(&[(3, 1)]);
        assert_eq!(criterion_t3(&m, &h, &q(1, 2)).unwrap(), q(1, 1));
        assert_eq!(gd_raw(&m, &h, &q(1, 2)).unwrap(), q(1, 1));
        assert_eq!(gd_formula(&m, &h, &q(1, 2)).unwrap(), q(0, 1));
        assert!(criterion_t3(&m, &h, &q(6, 1)).is_err());
        assert!(criterion_t3(&m, &h, &q(1, 5)).is_err());
    }

    #[test]
    fn chain_of_quotients() {
        let m: MSpec = "2:1,3:1".parse().unwrap();
        // 2·(9/4) = 9/2 → 3 → 2 → 4/3: only 3 and 2 are integers.
        let h = mx(&[(3, 1)]);
        assert_eq!(criterion_t3(&m, &h, &q(9, 4)).unwrap(), q(-1, 1));
        let h = mx(&[(2, 1)]);
        assert_eq!(criterion_t3(&m, &h, &q(9, 4)).unwrap(), q(1, 1));
        let h = mx(&[(1, -1)]);
        assert_eq!(criterion_t3(&m, &h, &q(1, 2)).unwrap(), q(-1, 1));
        assert_eq!(
            t3_scan(&m, &h, &q(2, 1)).unwrap(),
            vec![
                (q(1, 2), q(-1, 1)),
                (q(3, 4), q(1, 1)),
                (q(9, 8), q(-1, 1)),
                (q(27, 16), q(1, 1))
            ]
        );
    }

    #[test]
    fn raw_recurrence_identity() {
        let m: MSpec = "2:1,3:2".parse().unwrap();
        let h = mx(&[(1, -1), (2, 1), (6, 3)]);
        for d in [q(1, 2), q(3, 4), q(9, 8), q(3, 1), q(27, 16)] {
            let lhs =
                gd_raw(&m, &h, &d).unwrap() + q(2, 1) * gd_raw(&m, &h, &(&d * q(2, 3))).unwrap();
            let idx = &d * q(2, 1);
            let rhs = idx
                .to_u64()
                .and_then(|n| h.get(&n).cloned())
                .unwrap_or_default();
            assert_eq!(lhs, rhs, "d = {d}");
        }
    }
}
