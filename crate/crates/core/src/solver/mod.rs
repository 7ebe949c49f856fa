//! Solving `f(x^{b_0})^{e_0} ⋯ f(x^{b_m})^{e_m} = G(x)` and deciding when a
//! representation function can be eventually constant.

mod criteria;
mod decide;
mod formal;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

pub use criteria::{criterion_t3, gd_formula, gd_raw, t3_scan};
pub use decide::{
    almost_rational_bound, contradiction_certificate, decide, hypothesis_check, recurrence_data,
    Certificate, Contradiction, DecisionReport, RecurrenceData, Verdict, Witness,
};
pub use formal::{integrality_report, solve_formal, solve_formal_from, verify_solution};

use crate::cyclotomic::{nprime_cyclotomic_part, Basis, CycloProduct};
use crate::error::{domain, Result};
use crate::fps::{onemx_product, FracSeries};
use crate::mspec::MSpec;
use crate::poly::IntPolynomial;
use crate::rational::Rational;

/// The right-hand side `G(x)` of the functional equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhsSpec {
    /// `P(x)/(1 − x)` with `P ∈ Z[x]`, `P(0) = 1`, `P(1) ≠ 0`.
    PolyOver1mx(IntPolynomial),
    /// `∏ (1 − x^d)^{m_d}`.
    OnemxProduct(BTreeMap<u64, Rational>),
}

pub(crate) fn check_poly(p: &IntPolynomial) -> Result<()> {
    if !p.is_integral() {
        return domain("P must have integer coefficients");
    }
    if !p.constant_term().is_one() {
        return domain("P must satisfy P(0) = 1");
    }
    if p.eval(&Rational::one()).is_zero() {
        return domain("P must satisfy P(1) != 0");
    }
    Ok(())
}

impl RhsSpec {
    pub fn poly_over_1mx(p: IntPolynomial) -> Result<Self> {
        check_poly(&p)?;
        Ok(RhsSpec::PolyOver1mx(p))
    }

    pub fn onemx_product(mut exps: BTreeMap<u64, Rational>) -> Result<Self> {
        if exps.contains_key(&0) {
            return domain("product index 0 is not allowed");
        }
        exps.retain(|_, v| !v.is_zero());
        Ok(RhsSpec::OnemxProduct(exps))
    }

    /// `G(x) = 1`.
    pub fn one() -> Self {
        RhsSpec::OnemxProduct(BTreeMap::new())
    }

    /// `G` as a power series up to `cutoff`.
    pub fn expand(&self, cutoff: &Rational) -> Result<FracSeries> {
        match self {
            RhsSpec::PolyOver1mx(p) => {
                let geo = onemx_product(&BTreeMap::from([(1, -Rational::one())]), cutoff)?;
                p.to_series(cutoff)?.mul(&geo)
            }
            RhsSpec::OnemxProduct(exps) => onemx_product(exps, cutoff),
        }
    }

    /// The `N′`-cyclotomic part `H` of `G`, over the `1 − x^d` basis.
    pub fn nprime_part(&self, m: &MSpec) -> Result<CycloProduct> {
        match self {
            RhsSpec::PolyOver1mx(p) => nprime_cyclotomic_part(p, m, true)?.to_onemx(),
            RhsSpec::OnemxProduct(exps) => {
                // 1 − x^d with d ∉ N′ still carries Φ_f for its N′ divisors f,
                // so the split happens over the Φ basis.
                let phi = CycloProduct::new(Basis::Onemx, exps.clone())?.to_phi()?;
                let kept = phi
                    .exps()
                    .iter()
                    .filter(|(&d, _)| crate::arith::in_nprime(d, m))
                    .map(|(&d, v)| (d, v.clone()))
                    .collect();
                CycloProduct::new(Basis::Phi, kept)?.to_onemx()
            }
        }
    }
}

impl fmt::Display for RhsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhsSpec::PolyOver1mx(p) => write!(f, "({p})/(1 - x)"),
            RhsSpec::OnemxProduct(exps) => {
                let c = CycloProduct::new(Basis::Onemx, exps.clone()).map_err(|_| fmt::Error)?;
                write!(f, "{c}")
            }
        }
    }
}

impl Serialize for RhsSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
