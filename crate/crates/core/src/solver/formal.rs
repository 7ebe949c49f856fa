//! The unique fractional-series solution with `f(0) = 1`.
//!
//! Writing `L = log f`, the equation becomes linear:
//!
//! ```text
//! L(x) = (1/e)·log G(x^{1/b}) − Σ_i ν_i L(x^{θ_i})
//! ```
//!
//! Each `θ_i > 1`, so one pass of the right-hand side fixes every exponent
//! below `θ_min` times the previous agreement order. Iterating to a fixed
//! point at cutoff `T/b` and exponentiating gives `f`.

use super::RhsSpec;
use crate::error::{domain, usage, Error, Result};
use crate::fps::FracSeries;
use crate::mspec::MSpec;
use crate::rational::Rational;

const MAX_ITERATIONS: usize = 10_000;

/// Solves the equation with right-hand side `rhs` expanded to `cutoff`. The
/// returned series has cutoff `cutoff / b_0`, the range on which `rhs`
/// determines it.
pub fn solve_formal(m: &MSpec, rhs: &RhsSpec, cutoff: &Rational) -> Result<FracSeries> {
    solve_formal_from(m, rhs, cutoff, None)
}

/// As [`solve_formal`], iterating from `seed` (which must satisfy
/// `seed(0) = 1`) instead of from `1`.
pub fn solve_formal_from(
    m: &MSpec,
    rhs: &RhsSpec,
    cutoff: &Rational,
    seed: Option<&FracSeries>,
) -> Result<FracSeries> {
    if m.b() < 2 {
        return Err(Error::Hypothesis(format!(
            "the solver needs b_0 >= 2, got {}",
            m.b()
        )));
    }
    if !cutoff.is_positive() {
        return domain(format!("cutoff must be positive, got {cutoff}"));
    }
    let g = rhs.expand(cutoff)?;
    if !g.constant_term().is_one() {
        return domain("right-hand side must have constant term 1");
    }
    let b = Rational::from(m.b());
    let tf = cutoff / &b;
    let one = FracSeries::one(cutoff.clone())?;
    let base = g
        .sub(&one)?
        .log1p_series()?
        .substitute_power(&b.recip()?)?
        .scale(&Rational::from(m.e()).recip()?);
    let mut log_f = match seed {
        None => FracSeries::zero(tf.clone())?,
        Some(s) => {
            if !s.constant_term().is_one() {
                return domain("seed must have constant term 1");
            }
            if s.cutoff() < &tf {
                return usage(format!("seed cutoff {} is below {tf}", s.cutoff()));
            }
            let s = s.truncate(&tf)?;
            s.sub(&FracSeries::one(tf.clone())?)?.log1p_series()?
        }
    };
    let thetas = m.thetas();
    let nus = m.nus();
    for _ in 0..MAX_ITERATIONS {
        let mut next = base.clone();
        for (theta, nu) in thetas.iter().zip(&nus) {
            let shifted = log_f.substitute_power(theta)?.truncate(&tf)?;
            next = next.sub(&shifted.scale(nu))?;
        }
        if next == log_f {
            return log_f.exp_series();
        }
        log_f = next;
    }
    Err(Error::Capacity(
        "fixed-point iteration did not settle".into(),
    ))
}

/// Whether `∏ f(x^{b_i})^{e_i}` agrees with `rhs` up to `b_0·T_f`, the
/// range on which `f` determines the product.
pub fn verify_solution(f: &FracSeries, m: &MSpec, rhs: &RhsSpec) -> Result<bool> {
    let window = f.cutoff() * Rational::from(m.b());
    let mut product = FracSeries::one(window.clone())?;
    for &(b, e) in m.pairs() {
        let part = f.substitute_power(&Rational::from(b))?.truncate(&window)?;
        product = product.mul(&part.pow_u(e)?)?;
    }
    Ok(product == rhs.expand(&window)?)
}

/// Terms of `f` at exponents outside `Z≥0`. Empty exactly when `f` is an
/// ordinary power series up to its cutoff.
pub fn integrality_report(f: &FracSeries) -> Vec<(Rational, Rational)> {
    f.terms()
        .filter(|(e, _)| !e.is_integer())
        .map(|(e, c)| (e, c.clone()))
        .collect()
}
