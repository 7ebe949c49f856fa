//! Arithmetic predicates and operators on integers and rationals.
//!
//! Factorization uses trial division against a cached prime sieve. The sieve
//! cap defaults to 10^6 and can be overridden with the `FRACPOW_SIEVE_LIMIT`
//! environment variable (read once, on first use) or [`configure_sieve`].
//! Integers whose cofactor cannot be certified prime with the cached primes
//! produce [`Error::Capacity`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{capacity, domain, Error, Result};
use crate::mspec::MSpec;
use crate::rational::Rational;

pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;
pub const SIEVE_LIMIT_ENV: &str = "FRACPOW_SIEVE_LIMIT";

#[derive(Debug)]
pub struct Sieve {
    limit: u64,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2);
        let size = limit as usize + 1;
        let mut composite = vec![false; size];
        let mut primes = Vec::new();
        for i in 2..size {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j < size {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        Sieve { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime factorization `[(p, k)]` with ascending `p`.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return domain("cannot factor 0");
        }
        let mut rest = n;
        let mut out = Vec::new();
        for &p in &self.primes {
            if p.saturating_mul(p) > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut k = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    k += 1;
                }
                out.push((p, k));
            }
        }
        if rest > 1 {
            let bound = (self.limit as u128 + 1) * (self.limit as u128 + 1);
            if (rest as u128) >= bound {
                return capacity(format!(
                    "cannot factor {n}: cofactor {rest} exceeds sieve limit {}",
                    self.limit
                ));
            }
            out.push((rest, 1));
        }
        Ok(out)
    }
}

static SIEVE: OnceLock<Sieve> = OnceLock::new();

/// Installs a sieve with the given cap. Returns `false` if the global sieve
/// was already built (the earlier one stays in effect).
pub fn configure_sieve(limit: u64) -> bool {
    SIEVE.set(Sieve::new(limit)).is_ok()
}

pub fn sieve() -> &'static Sieve {
    SIEVE.get_or_init(|| {
        let limit = std::env::var(SIEVE_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .unwrap_or(DEFAULT_SIEVE_LIMIT);
        Sieve::new(limit)
    })
}

pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    sieve().factorize(n)
}

pub fn is_prime(p: u64) -> Result<bool> {
    if p < 2 {
        return Ok(false);
    }
    Ok(matches!(factorize(p)?.as_slice(), [(q, 1)] if *q == p))
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p)? {
        Ok(())
    } else {
        domain(format!("{p} is not prime"))
    }
}

fn ord_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        n = quot;
        v += 1;
    }
}

/// `ord_p(q)`: the exponent of `p` in the factorization of `q ≠ 0`.
pub fn ord_p(q: &Rational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::UndefinedInput("ord_p(0) is undefined".into()));
    }
    require_prime(p)?;
    Ok(ord_int(q.numer(), p) - ord_int(q.denom(), p))
}

pub(crate) fn ord_u64(n: u64, p: u64) -> u32 {
    let mut n = n;
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The Möbius function.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return domain("mobius(0) is undefined");
    }
    let f = factorize(n)?;
    if f.iter().any(|&(_, k)| k > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return domain("euler_phi(0) is undefined");
    }
    Ok(factorize(n)?
        .into_iter()
        .map(|(p, k)| (p - 1) * p.pow(k - 1))
        .product())
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, k) in factorize(n)? {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Strips from `n` every prime factor it shares with `radical_of`, returning
/// the leftover cofactor. `n ∈ N′` exactly when the cofactor is 1.
fn strip_shared(n: &BigInt, radical_of: &BigInt) -> BigInt {
    let mut rest = n.abs();
    loop {
        let g = rest.gcd(radical_of);
        if g.is_one() || g.is_zero() {
            return rest;
        }
        rest /= g;
    }
}

fn coefficient_product(m: &MSpec) -> BigInt {
    m.coefficients().map(BigInt::from).product()
}

/// `n ∈ N′`: every prime divisor of `n` divides `b_0 b_1 … b_m`.
pub fn in_nprime(n: u64, m: &MSpec) -> bool {
    n >= 1 && in_nprime_big(&BigInt::from(n), m)
}

pub(crate) fn in_nprime_big(n: &BigInt, m: &MSpec) -> bool {
    n.is_positive() && strip_shared(n, &coefficient_product(m)).is_one()
}

/// `q ∈ Q_b′`: `q = n / b^t` for some `n ∈ N′` and `t ≥ 0`.
pub fn in_qbprime(q: &Rational, m: &MSpec) -> bool {
    if !q.is_positive() {
        return false;
    }
    strip_shared(q.denom(), &BigInt::from(m.b())).is_one() && in_nprime_big(q.numer(), m)
}

/// `[y] = Π_{ord_p(y) > 0} p^{ord_p(y)}`.
///
/// In lowest terms the primes with positive order are exactly those of the
/// numerator, so `[y]` is the reduced numerator.
pub fn bracket(y: &Rational) -> Result<BigInt> {
    if !y.is_positive() {
        return domain(format!("bracket needs a positive argument, got {y}"));
    }
    Ok(y.numer().clone())
}

pub(crate) fn bracket_u64(y: &Rational) -> Option<u64> {
    y.numer().to_u64()
}

/// `⟨a|d) = Π_{p | gcd(a,d)} p^{ord_p(a)}`.
pub fn angle(a: u64, d: u64) -> u64 {
    let g = gcd(a, d);
    if g <= 1 {
        return 1;
    }
    let mut rest = a;
    loop {
        let h = gcd(rest, g);
        if h == 1 {
            return a / rest;
        }
        rest /= h;
    }
}

/// `λ | μ` for positive rationals: `μ/λ` is a positive integer.
pub fn divides_rational(lambda: &Rational, mu: &Rational) -> bool {
    if !lambda.is_positive() || !mu.is_positive() {
        return false;
    }
    (mu / lambda).is_integer()
}

fn require_qb_minus_n(key: &Rational, m: &MSpec) -> Result<()> {
    let in_n = key.is_integer() && in_nprime_big(key.numer(), m);
    if in_qbprime(key, m) && !in_n {
        Ok(())
    } else {
        domain(format!("{key} is not in Q_b' - N'"))
    }
}

fn integer_ratio(n: &Rational, d: &Rational) -> Option<u64> {
    let r = n / d;
    if r.is_integer() && r.is_positive() {
        r.to_u64()
    } else {
        None
    }
}

/// Divisor sums `B_m = Σ_{n | m} A_n` over keys drawn from `Q_b′ − N′`,
/// evaluated at every point of `window`.
pub fn divisor_sum(
    a: &BTreeMap<Rational, Rational>,
    window: &BTreeSet<Rational>,
    m: &MSpec,
) -> Result<BTreeMap<Rational, Rational>> {
    for key in a.keys().chain(window.iter()) {
        require_qb_minus_n(key, m)?;
    }
    let mut out = BTreeMap::new();
    for w in window {
        let s: Rational = a
            .iter()
            .filter(|(n, _)| integer_ratio(w, n).is_some())
            .map(|(_, v)| v.clone())
            .sum();
        if !s.is_zero() {
            out.insert(w.clone(), s);
        }
    }
    Ok(out)
}

/// Inverse of [`divisor_sum`]: `A_n = Σ_{m | n} μ(n/m) B_m`.
///
/// The result is reported on the keys of `b`. Composing with
/// [`divisor_sum`] is the identity whenever the key set is closed under
/// taking intermediate divisors (see [`divisor_closure`]).
pub fn mobius_inversion_modified(
    b: &BTreeMap<Rational, Rational>,
    m: &MSpec,
) -> Result<BTreeMap<Rational, Rational>> {
    for key in b.keys() {
        require_qb_minus_n(key, m)?;
    }
    let mut out = BTreeMap::new();
    for n in b.keys() {
        let mut s = Rational::zero();
        for (mm, bv) in b {
            if let Some(k) = integer_ratio(n, mm) {
                match mobius(k)? {
                    0 => {}
                    1 => s += bv,
                    _ => s -= bv,
                }
            }
        }
        if !s.is_zero() {
            out.insert(n.clone(), s);
        }
    }
    Ok(out)
}

/// Smallest superset of `keys` containing every `c` with `l | c | n` for
/// `l, n` in the set.
pub fn divisor_closure(keys: &BTreeSet<Rational>) -> Result<BTreeSet<Rational>> {
    let mut out = keys.clone();
    for l in keys {
        for n in keys {
            if let Some(k) = integer_ratio(n, l) {
                for d in divisors(k)? {
                    out.insert(l * Rational::from(d));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m23() -> MSpec {
        "2:1,3:1".parse().unwrap()
    }

    #[test]
    fn ord_p_examples() {
        assert_eq!(ord_p(&q(8, 1), 2).unwrap(), 3);
        assert_eq!(ord_p(&q(2, 9), 3).unwrap(), -2);
        assert_eq!(ord_p(&q(7, 1), 5).unwrap(), 0);
        assert!(matches!(ord_p(&q(0, 1), 2), Err(Error::UndefinedInput(_))));
        assert!(matches!(ord_p(&q(4, 1), 4), Err(Error::Domain(_))));
    }

    #[test]
    fn mobius_and_phi_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert!(mobius(0).is_err());
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(euler_phi(97).unwrap(), 96);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn phi_matches_coprime_count() {
        for n in 1..300u64 {
            let brute = (1..=n).filter(|&u| gcd(u, n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn mobius_sums_vanish() {
        for n in 1..500u64 {
            let s: i64 = divisors(n)
                .unwrap()
                .into_iter()
                .map(|d| mobius(d).unwrap() as i64)
                .sum();
            assert_eq!(s, if n == 1 { 1 } else { 0 }, "n = {n}");
        }
    }

    #[test]
    fn capacity_error_beyond_sieve() {
        let small = Sieve::new(100);
        assert_eq!(small.factorize(97 * 89).unwrap(), vec![(89, 1), (97, 1)]);
        // 10007 * 10009 has no factor below 100 and is larger than 101^2.
        assert!(matches!(
            small.factorize(10007 * 10009),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn nprime_membership() {
        let m = m23();
        assert!(in_nprime(6, &m));
        assert!(!in_nprime(5, &m));
        assert!(in_nprime(1, &m));
        assert!(in_nprime(72, &m));
        assert!(!in_nprime(0, &m));
    }

    #[test]
    fn qbprime_membership() {
        let m = m23();
        assert!(in_qbprime(&q(3, 4), &m));
        assert!(!in_qbprime(&q(5, 2), &m));
        assert!(in_qbprime(&q(6, 1), &m));
        assert!(!in_qbprime(&q(1, 3), &m));
        assert!(!in_qbprime(&q(-1, 2), &m));
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(&q(9, 4)).unwrap(), BigInt::from(9));
        assert_eq!(bracket(&q(5, 1)).unwrap(), BigInt::from(5));
        assert_eq!(bracket(&q(3, 7)).unwrap(), BigInt::from(3));
        assert!(bracket(&q(0, 1)).is_err());
        assert!(bracket(&q(-3, 2)).is_err());
    }

    #[test]
    fn angle_examples() {
        assert_eq!(angle(4, 6), 4);
        assert_eq!(angle(9, 4), 1);
        assert_eq!(angle(12, 10), 4);
        assert_eq!(angle(18, 6), 18);
    }

    #[test]
    fn rational_divisibility() {
        assert!(divides_rational(&q(1, 2), &q(3, 2)));
        assert!(!divides_rational(&q(3, 4), &q(1, 1)));
        assert!(divides_rational(&q(5, 3), &q(5, 3)));
    }

    #[test]
    fn inversion_edge_cases() {
        let m = m23();
        assert!(mobius_inversion_modified(&BTreeMap::new(), &m)
            .unwrap()
            .is_empty());
        let single = BTreeMap::from([(q(3, 2), q(7, 5))]);
        assert_eq!(mobius_inversion_modified(&single, &m).unwrap(), single);
        let bad = BTreeMap::from([(q(3, 1), q(1, 1))]);
        assert!(mobius_inversion_modified(&bad, &m).is_err());
        let bad = BTreeMap::from([(q(1, 5), q(1, 1))]);
        assert!(mobius_inversion_modified(&bad, &m).is_err());
    }

    #[test]
    fn inversion_round_trip_small() {
        let m = m23();
        let a = BTreeMap::from([(q(1, 2), q(2, 1)), (q(3, 2), q(-1, 3)), (q(9, 2), q(5, 1))]);
        let window = divisor_closure(&a.keys().cloned().collect()).unwrap();
        let b = divisor_sum(&a, &window, &m).unwrap();
        // 9/2 collects all three keys.
        assert_eq!(b[&q(9, 2)], q(2, 1) - q(1, 3) + q(5, 1));
        assert_eq!(mobius_inversion_modified(&b, &m).unwrap(), a);
    }
}
