//! Finite products of `1 + h_n` factors and the inverse problem of reading
//! off product exponents `f = ∏ (1 − x^n)^{α_n}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::FracSeries;
use crate::error::{domain, Result};
use crate::rational::Rational;

/// `∏ factors`, each of the form `1 + h` with `ord h > 0`. The empty product
/// is `1` at the given cutoff.
pub fn product_truncated(cutoff: &Rational, factors: &[FracSeries]) -> Result<FracSeries> {
    let mut acc = FracSeries::one(cutoff.clone())?;
    for (i, f) in factors.iter().enumerate() {
        if !f.constant_term().is_one() {
            return domain(format!("factor {i} does not have constant term 1"));
        }
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

/// `(1 − x^d)^α` truncated at `cutoff`.
pub fn onemx_power(d: &Rational, alpha: &Rational, cutoff: &Rational) -> Result<FracSeries> {
    if !d.is_positive() {
        return domain(format!("exponent {d} must be positive"));
    }
    let base = FracSeries::from_terms(
        [
            (Rational::zero(), Rational::one()),
            (d.clone(), -Rational::one()),
        ],
        cutoff.clone(),
    )?;
    if let Some(n) = alpha.to_u64() {
        return base.pow_u(n);
    }
    base.pow_alpha(alpha)
}

/// `∏_d (1 − x^d)^{m_d}` truncated at `cutoff`.
pub fn onemx_product(exps: &BTreeMap<u64, Rational>, cutoff: &Rational) -> Result<FracSeries> {
    let mut acc = FracSeries::one(cutoff.clone())?;
    for (&d, m) in exps {
        if m.is_zero() || &Rational::from(d) > cutoff {
            continue;
        }
        acc = acc.mul(&onemx_power(&Rational::from(d), m, cutoff)?)?;
    }
    Ok(acc)
}

/// `τ(1), …, τ(upto)` from `Δ = x ∏_{n≥1} (1 − x^n)^{24}`.
pub fn ramanujan_tau(upto: u64) -> Result<Vec<BigInt>> {
    if upto == 0 {
        return Ok(Vec::new());
    }
    let top = upto - 1;
    let exps = (1..=top).map(|n| (n, Rational::from(24u64))).collect();
    let eta24 = onemx_product(&exps, &Rational::from(top))?;
    (0..=top)
        .map(|n| {
            let c = eta24.coeff(&Rational::from(n));
            match c.is_integer() {
                true => Ok(c.numer().clone()),
                false => domain(format!("non-integral coefficient {c}")),
            }
        })
        .collect()
}

/// The exponents `α_n`, `n ≤ max_n`, with `f = ∏ (1 − x^n)^{α_n}` up to
/// `x^{max_n}`.
///
/// Works on the logarithmic derivative: `x f′/f = −Σ_N (Σ_{n|N} n α_n) x^N`,
/// so the lowest remaining coefficient fixes the next `α_n`, whose
/// contribution is then stripped from all its multiples.
pub fn recover_product_exponents(f: &FracSeries, max_n: u64) -> Result<BTreeMap<u64, Rational>> {
    if !f.constant_term().is_one() {
        return domain("exponent recovery needs f(0) = 1");
    }
    let top = Rational::from(max_n);
    if f.cutoff() < &top {
        return domain(format!("cutoff {} is below max_n = {max_n}", f.cutoff()));
    }
    let head = f.truncate(&top)?;
    if let Some((e, _)) = head.terms().find(|(e, _)| !e.is_integer()) {
        return domain(format!("fractional exponent {e} below {max_n}"));
    }
    let n = max_n as usize;
    let mut dense = vec![Rational::zero(); n + 1];
    for (e, c) in head.terms() {
        dense[e.to_u64().expect("integer exponent") as usize] = c.clone();
    }
    // c = x f'/f via f·c = x f'.
    let mut c = vec![Rational::zero(); n + 1];
    for k in 1..=n {
        let mut s = &dense[k] * Rational::from(k);
        for j in 1..k {
            if !dense[j].is_zero() && !c[k - j].is_zero() {
                s -= &dense[j] * &c[k - j];
            }
        }
        c[k] = s;
    }
    let mut out = BTreeMap::new();
    for k in 1..=n {
        let kk = Rational::from(k);
        let alpha = -&c[k] / &kk;
        if alpha.is_zero() {
            continue;
        }
        for mult in (k..=n).step_by(k) {
            c[mult] += &alpha * &kk;
        }
        out.insert(k as u64, alpha);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn empty_product_is_one() {
        assert_eq!(
            product_truncated(&q(5, 1), &[]).unwrap(),
            FracSeries::one(q(5, 1)).unwrap()
        );
        let bad = FracSeries::constant(q(2, 1), q(5, 1)).unwrap();
        assert!(product_truncated(&q(5, 1), &[bad]).is_err());
    }

    #[test]
    fn recovers_simple_exponents() {
        let t = q(8, 1);
        let f = onemx_power(&q(1, 1), &q(1, 1), &t).unwrap();
        assert_eq!(
            recover_product_exponents(&f, 8).unwrap(),
            BTreeMap::from([(1, q(1, 1))])
        );
        let g = f.invert().unwrap();
        assert_eq!(
            recover_product_exponents(&g, 8).unwrap(),
            BTreeMap::from([(1, q(-1, 1))])
        );
    }

    #[test]
    fn recovery_rejects_fractional_terms() {
        let f = FracSeries::from_terms([(q(0, 1), q(1, 1)), (q(1, 2), q(1, 1))], q(3, 1)).unwrap();
        assert!(recover_product_exponents(&f, 2).is_err());
        assert!(recover_product_exponents(&FracSeries::one(q(3, 1)).unwrap(), 4).is_err());
    }

    #[test]
    fn rational_exponent_round_trip() {
        let exps = BTreeMap::from([(1, q(1, 2)), (2, q(-3, 1)), (5, q(2, 3))]);
        let f = onemx_product(&exps, &q(12, 1)).unwrap();
        assert_eq!(recover_product_exponents(&f, 12).unwrap(), exps);
    }
}
