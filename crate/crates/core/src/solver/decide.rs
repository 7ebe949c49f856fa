//! Hypothesis witnesses, the prime-power recurrence and the verdict.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::criteria::gd_formula;
use super::formal::{integrality_report, solve_formal};
use super::{check_poly, RhsSpec};
use crate::arith::{factorize, in_nprime, ord_u64};
use crate::cyclotomic::{nprime_cyclotomic_part, CycloProduct};
use crate::error::{Error, Result};
use crate::mspec::MSpec;
use crate::poly::IntPolynomial;
use crate::rational::Rational;

/// A prime `p` and exponent `t` with `p^t | b_0` and `p^t ∤ b_i` for every
/// `i ≥ 1`. `t` is the least such exponent; `ord_b0` is `ord_p(b_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub p: u64,
    pub t: u32,
    pub ord_b0: u32,
}

impl Witness {
    /// `p^t | b_0` and `p^t ∤ b_i` are equivalent to
    /// `ord_p(b_0) > ord_p(b_i)` for all `i ≥ 1`, so every witness also
    /// satisfies the strict-dominance form.
    pub fn strict_dominance(&self) -> bool {
        self.ord_b0 >= self.t
    }
}

fn validate_witness(m: &MSpec, w: &Witness) -> Result<()> {
    let pt = w.p.checked_pow(w.t);
    let ok = w.t >= 1
        && crate::arith::is_prime(w.p)?
        && pt.is_some_and(|pt| {
            m.b().is_multiple_of(pt) && m.pairs()[1..].iter().all(|&(b, _)| b % pt != 0)
        });
    if !ok {
        return Err(Error::Hypothesis(format!(
            "({}, {}) is not a valid witness for {m}",
            w.p, w.t
        )));
    }
    Ok(())
}

/// The witness with the least prime, and for it the least exponent.
pub fn hypothesis_check(m: &MSpec) -> Result<Option<Witness>> {
    for (p, ord_b0) in factorize(m.b())? {
        let others = m.pairs()[1..]
            .iter()
            .map(|&(b, _)| ord_u64(b, p))
            .max()
            .unwrap_or(0);
        if ord_b0 > others {
            return Ok(Some(Witness {
                p,
                t: others + 1,
                ord_b0,
            }));
        }
    }
    Ok(None)
}

/// `D*` such that `g_d = 0` for every `d ≥ D*`.
///
/// With `θ_i = ρ_i p^{-w_i}`, `ρ = max ρ_i` and `S` the largest support
/// point, every integer index `bdθ^{-1}⋯` is at least
/// `min(√(bd), p^{log_ρ(bd)/2})`. Both exceed `S` once `bd > S²` and
/// `bd ≥ ρ^{2k}` where `p^k > S`.
pub fn almost_rational_bound(
    m: &MSpec,
    mexps: &BTreeMap<u64, Rational>,
    witness: &Witness,
) -> Result<BigInt> {
    validate_witness(m, witness)?;
    let Some(s) = mexps
        .iter()
        .filter(|(&d, v)| !v.is_zero() && in_nprime(d, m))
        .map(|(&d, _)| d)
        .max()
    else {
        return Ok(BigInt::one());
    };
    let p = witness.p;
    let ord_b0 = ord_u64(m.b(), p);
    let rho = m.pairs()[1..]
        .iter()
        .map(|&(bi, _)| {
            let w = ord_b0 - ord_u64(bi, p);
            Rational::new(bi, m.b()) * Rational::from(p.pow(w))
        })
        .max()
        .unwrap_or_else(Rational::one);
    let s_big = BigInt::from(s);
    let mut k0 = 0i32;
    while num_traits::pow(BigInt::from(p), k0 as usize) <= s_big {
        k0 += 1;
    }
    let b = Rational::from(m.b());
    let by_sqrt = Rational::from(&s_big * &s_big) / &b;
    let by_power = rho.pow(2 * k0) / &b;
    let first: BigInt = by_sqrt.floor() + 1;
    let second = by_power.ceil();
    Ok(first.max(second))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceData {
    pub p: u64,
    /// `ord_p(b_0)`, the length of the recurrence.
    pub t: u32,
    /// `a_j = Σ_{ord_p(b_i) = j} e_i` for `j = 0…t`.
    pub a: Vec<u64>,
    #[serde(rename = "A")]
    pub total: u64,
    pub d_gcd: u64,
    /// `H′_0 = −1/A`.
    pub h0_prime: Rational,
}

/// Coefficients of the recurrence obtained at the indices `d = p^n`.
pub fn recurrence_data(m: &MSpec, witness: &Witness) -> Result<RecurrenceData> {
    validate_witness(m, witness)?;
    if m.gcd_b() != 1 {
        return Err(Error::Hypothesis(format!(
            "the recurrence needs gcd(b_0, …, b_m) = 1, got {}",
            m.gcd_b()
        )));
    }
    let p = witness.p;
    let t = ord_u64(m.b(), p);
    let mut a = vec![0u64; t as usize + 1];
    for &(b, e) in m.pairs() {
        a[ord_u64(b, p) as usize] += e;
    }
    if a[0] == 0 {
        return Err(Error::Hypothesis(format!(
            "a_0 = 0: every b_i is divisible by {p}"
        )));
    }
    let total: u64 = a.iter().sum();
    let d_gcd = a.iter().fold(0u64, |g, &x| g.gcd(&x));
    Ok(RecurrenceData {
        p,
        t,
        a,
        total,
        d_gcd,
        h0_prime: -Rational::new(1, total),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub d_gcd: u64,
    #[serde(rename = "A")]
    pub total: u64,
    /// `0 < d_gcd < A`, so `d_gcd / A` is not an integer.
    pub holds: bool,
}

pub fn contradiction_certificate(data: &RecurrenceData) -> Contradiction {
    Contradiction {
        d_gcd: data.d_gcd,
        total: data.total,
        holds: 0 < data.d_gcd && data.d_gcd < data.total,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ImpossibleByTheorem,
    OutsideHypothesis,
    DegenerateGcd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub witness: Witness,
    #[serde(rename = "H")]
    pub h: CycloProduct,
    pub mexps: CycloProduct,
    /// `(d, g_d)` for `d ∈ N′`, `d ≤ 64`.
    pub g_samples: Vec<(u64, Rational)>,
    #[serde(serialize_with = "as_string")]
    pub d_star: BigInt,
    pub recurrence: RecurrenceData,
    pub contradiction: Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub m: MSpec,
    pub verdict: Verdict,
    pub reason: String,
    pub certificate: Option<Certificate>,
    /// Non-integer terms of the formal solution at a small cutoff, when one
    /// was computed.
    pub evidence: Option<Vec<(Rational, Rational)>>,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

const SAMPLE_LIMIT: u64 = 64;
const EVIDENCE_CUTOFF: i64 = 12;

/// Classifies `M` for `G = P/(1 − x)` (`P = 1` when absent).
pub fn decide(m: &MSpec, p_poly: Option<&IntPolynomial>) -> Result<DecisionReport> {
    let one = IntPolynomial::one();
    let p = p_poly.unwrap_or(&one);
    check_poly(p)?;
    let report = |verdict, reason: String, certificate, evidence| DecisionReport {
        m: m.clone(),
        verdict,
        reason,
        certificate,
        evidence,
    };
    let g = m.gcd_b();
    if g > 1 {
        return Ok(report(
            Verdict::DegenerateGcd,
            format!("gcd of the coefficients is {g}: every sum is a multiple of {g}"),
            None,
            None,
        ));
    }
    if m.b() == 1 {
        return Ok(report(
            Verdict::OutsideHypothesis,
            "b_0 = 1 is outside the range of the solver".into(),
            None,
            None,
        ));
    }
    if let Some(witness) = hypothesis_check(m)? {
        let h = nprime_cyclotomic_part(p, m, true)?;
        let mexps = h.to_onemx()?;
        let mut g_samples = Vec::new();
        for d in 1..=SAMPLE_LIMIT {
            if in_nprime(d, m) {
                g_samples.push((d, gd_formula(m, mexps.exps(), &Rational::from(d))?));
            }
        }
        let d_star = almost_rational_bound(m, mexps.exps(), &witness)?;
        let recurrence = recurrence_data(m, &witness)?;
        let contradiction = contradiction_certificate(&recurrence);
        let reason = format!(
            "{}^{} divides b_0 but no other coefficient; d_gcd = {} < A = {}",
            witness.p, witness.t, recurrence.d_gcd, recurrence.total
        );
        let cert = Certificate {
            witness,
            h,
            mexps,
            g_samples,
            d_star,
            recurrence,
            contradiction,
        };
        return Ok(report(
            Verdict::ImpossibleByTheorem,
            reason,
            Some(cert),
            None,
        ));
    }
    let rhs = RhsSpec::PolyOver1mx(p.clone());
    let f = solve_formal(m, &rhs, &Rational::from(EVIDENCE_CUTOFF))?;
    Ok(report(
        Verdict::OutsideHypothesis,
        "no prime power divides b_0 without dividing another coefficient".into(),
        None,
        Some(integrality_report(&f)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ms(s: &str) -> MSpec {
        s.parse().unwrap()
    }

    #[test]
    fn witnesses() {
        assert_eq!(
            hypothesis_check(&ms("2:1,3:1")).unwrap(),
            Some(Witness {
                p: 2,
                t: 1,
                ord_b0: 1
            })
        );
        assert_eq!(hypothesis_check(&ms("2:1,3:1,4:1,6:1")).unwrap(), None);
        assert_eq!(
            hypothesis_check(&ms("4:1,6:1")).unwrap(),
            Some(Witness {
                p: 2,
                t: 2,
                ord_b0: 2
            })
        );
    }

    #[test]
    fn recurrence_examples() {
        let m = ms("2:1,3:1");
        let w = hypothesis_check(&m).unwrap().unwrap();
        let r = recurrence_data(&m, &w).unwrap();
        assert_eq!(r.a, vec![1, 1]);
        assert_eq!((r.total, r.d_gcd), (2, 1));
        assert_eq!(r.h0_prime, q(-1, 2));
        assert!(contradiction_certificate(&r).holds);
        let m = ms("4:2,6:3");
        let w = Witness {
            p: 2,
            t: 2,
            ord_b0: 2,
        };
        assert!(matches!(recurrence_data(&m, &w), Err(Error::Hypothesis(_))));
        let bad = Witness {
            p: 3,
            t: 1,
            ord_b0: 0,
        };
        assert!(recurrence_data(&ms("2:1,3:1"), &bad).is_err());
    }

    #[test]
    fn bound_examples() {
        let m = ms("4:1,6:1");
        let w = hypothesis_check(&m).unwrap().unwrap();
        assert_eq!(
            almost_rational_bound(&m, &BTreeMap::new(), &w).unwrap(),
            BigInt::one()
        );
        let h = BTreeMap::from([(1, q(-1, 1)), (4, q(2, 1))]);
        assert_eq!(
            almost_rational_bound(&m, &h, &w).unwrap(),
            BigInt::from(183)
        );
    }

    #[test]
    fn verdicts() {
        let r = decide(&ms("2:1,3:1"), None).unwrap();
        assert_eq!(r.verdict, Verdict::ImpossibleByTheorem);
        let c = r.certificate.unwrap();
        assert_eq!((c.witness.p, c.witness.t), (2, 1));
        assert_eq!(c.h.exps(), &BTreeMap::from([(1, q(-1, 1))]));
        assert_eq!((c.contradiction.d_gcd, c.contradiction.total), (1, 2));
        assert_eq!(
            decide(&ms("2:1,4:1"), None).unwrap().verdict,
            Verdict::DegenerateGcd
        );
        assert_eq!(
            decide(&ms("1:1,2:1"), None).unwrap().verdict,
            Verdict::OutsideHypothesis
        );
        let bad = IntPolynomial::from_ints(&[2, 1]);
        assert!(decide(&ms("2:1,3:1"), Some(&bad)).is_err());
    }
}
