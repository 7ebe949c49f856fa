//! Inverse, exponential, logarithm and real powers.
//!
//! Each one is computed from a first-order coefficient recurrence obtained by
//! applying `x·d/dx` to the defining identity, so no composition of series is
//! ever formed. The recurrences only visit exponents in the additive closure
//! of the input support, which is where the result lives.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::FracSeries;
use crate::error::{domain, Error, Result};
use crate::rational::Rational;

/// Sorted additive closure of `gens` (all positive) below `limit`, with 0.
fn closure(gens: &[u128], limit: u128) -> Vec<u128> {
    let mut found = BTreeSet::from([0u128]);
    let mut work = BTreeSet::from([0u128]);
    while let Some(k) = work.pop_first() {
        for &g in gens {
            let next = k + g;
            if next > limit {
                break;
            }
            if found.insert(next) {
                work.insert(next);
            }
        }
    }
    found.into_iter().collect()
}

/// Runs `g_k = step(k, Σ-input)` over the closure of the positive support.
///
/// `step` receives `k` and an iterator over `(j, h_j, g_{k-j})` for every
/// positive support point `j ≤ k` whose complement already has a value.
fn run_recurrence<F>(f: &FracSeries, g0: Rational, mut step: F) -> Result<FracSeries>
where
    F: FnMut(u128, &mut dyn Iterator<Item = (u128, &Rational, &Rational)>) -> Rational,
{
    let limit = f.limit()?;
    let h: Vec<(u128, &Rational)> = f
        .terms
        .iter()
        .filter(|(&k, _)| k > 0)
        .map(|(&k, c)| (k, c))
        .collect();
    let gens: Vec<u128> = h.iter().map(|&(k, _)| k).collect();
    let mut g: HashMap<u128, Rational> = HashMap::new();
    g.insert(0, g0);
    for k in closure(&gens, limit).into_iter().skip(1) {
        let value = {
            let mut it = h
                .iter()
                .take_while(|&&(j, _)| j <= k)
                .filter_map(|&(j, hj)| g.get(&(k - j)).map(|gk| (j, hj, gk)));
            step(k, &mut it)
        };
        if !value.is_zero() {
            g.insert(k, value);
        }
    }
    let terms: BTreeMap<u128, Rational> = g.into_iter().collect();
    Ok(FracSeries::from_grid(f.cutoff.clone(), f.denom, terms))
}

impl FracSeries {
    /// Multiplicative inverse, defined exactly when `f(0) ≠ 0`.
    pub fn invert(&self) -> Result<FracSeries> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotInvertible("series with f(0) = 0".into()));
        }
        let inv_c = c.recip()?;
        let neg_inv_c = -&inv_c;
        run_recurrence(self, inv_c, |_, terms| {
            let s: Rational = terms.map(|(_, hj, gk)| hj * gk).sum();
            s * &neg_inv_c
        })
    }

    /// `exp(f)` for `ord f > 0`.
    pub fn exp_series(&self) -> Result<FracSeries> {
        if !self.constant_term().is_zero() {
            return domain("exp_series needs a series without constant term");
        }
        run_recurrence(self, Rational::one(), |k, terms| {
            let s: Rational = terms.map(|(j, hj, gk)| hj * gk * Rational::from(j)).sum();
            s / Rational::from(k)
        })
    }

    /// `log(1 + f)` for `ord f > 0`.
    pub fn log1p_series(&self) -> Result<FracSeries> {
        if !self.constant_term().is_zero() {
            return domain("log1p_series needs a series without constant term");
        }
        let mut logs: HashMap<u128, Rational> = HashMap::new();
        let mut out = BTreeMap::new();
        let limit = self.limit()?;
        let h: Vec<(u128, &Rational)> = self.terms.iter().map(|(&k, c)| (k, c)).collect();
        let gens: Vec<u128> = h.iter().map(|&(k, _)| k).collect();
        for k in closure(&gens, limit).into_iter().skip(1) {
            let kk = Rational::from(k);
            let mut s = self.terms.get(&k).map(|hk| hk * &kk).unwrap_or_default();
            for &(j, hj) in h.iter().take_while(|&&(j, _)| j < k) {
                if let Some(l) = logs.get(&(k - j)) {
                    s -= hj * l * Rational::from(k - j);
                }
            }
            let v = s / kk;
            if !v.is_zero() {
                logs.insert(k, v.clone());
                out.insert(k, v);
            }
        }
        Ok(FracSeries::from_grid(self.cutoff.clone(), self.denom, out))
    }

    /// `f^α` for `f = 1 + h` with `ord h > 0`.
    pub fn pow_alpha(&self, alpha: &Rational) -> Result<FracSeries> {
        if !self.constant_term().is_one() {
            return domain("pow_alpha needs a series with constant term 1");
        }
        run_recurrence(self, Rational::one(), |k, terms| {
            let s: Rational = terms
                .map(|(j, hj, gk)| {
                    let weight = alpha * Rational::from(j) - Rational::from(k - j);
                    hj * gk * weight
                })
                .sum();
            s / Rational::from(k)
        })
    }
}
