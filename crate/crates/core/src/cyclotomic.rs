//! Cyclotomic polynomials with constant term 1 and formal products of them.
//!
//! `Φ_n(x) = ∏ (1 − ζx)` over primitive `n`-th roots of unity `ζ`, so
//! `Φ_1 = 1 − x`, `Φ_2 = 1 + x` and `1 − x^n = ∏_{d|n} Φ_d`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{angle, bracket_u64, divisors, euler_phi, in_nprime, mobius};
use crate::error::{domain, Result};
use crate::fps::{onemx_product, FracSeries};
use crate::mspec::MSpec;
use crate::poly::IntPolynomial;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `∏ Φ_d(x)^{h_d}`
    Phi,
    /// `∏ (1 − x^d)^{g_d}`
    Onemx,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Phi => "phi",
            Basis::Onemx => "onemx",
        })
    }
}

/// A finite formal product over one of the two bases, stored as the map
/// `d → exponent` with zero exponents removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloProduct {
    basis: Basis,
    exps: BTreeMap<u64, Rational>,
}

impl CycloProduct {
    pub fn new(basis: Basis, exps: BTreeMap<u64, Rational>) -> Result<Self> {
        if exps.contains_key(&0) {
            return domain("cyclotomic index 0 is not allowed");
        }
        Ok(Self::build(basis, exps))
    }

    fn build(basis: Basis, mut exps: BTreeMap<u64, Rational>) -> Self {
        exps.retain(|_, v| !v.is_zero());
        CycloProduct { basis, exps }
    }

    pub fn one(basis: Basis) -> Self {
        CycloProduct {
            basis,
            exps: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn exps(&self) -> &BTreeMap<u64, Rational> {
        &self.exps
    }

    pub fn get(&self, d: u64) -> Rational {
        self.exps.get(&d).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Exponent-wise sum, i.e. the product of the two formal products.
    pub fn mul(&self, other: &CycloProduct) -> Result<CycloProduct> {
        if self.basis != other.basis {
            return domain("cannot combine products over different bases");
        }
        let mut exps = self.exps.clone();
        for (&d, v) in &other.exps {
            *exps.entry(d).or_default() += v;
        }
        Ok(Self::build(self.basis, exps))
    }

    pub fn scale(&self, c: &Rational) -> CycloProduct {
        Self::build(
            self.basis,
            self.exps.iter().map(|(&d, v)| (d, v * c)).collect(),
        )
    }

    /// Rewrites over the `Φ` basis: `h_f = Σ_{f|d} g_d`.
    pub fn to_phi(&self) -> Result<CycloProduct> {
        if self.basis == Basis::Phi {
            return Ok(self.clone());
        }
        let mut exps: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&d, g) in &self.exps {
            for f in divisors(d)? {
                *exps.entry(f).or_default() += g;
            }
        }
        Ok(Self::build(Basis::Phi, exps))
    }

    /// Rewrites over the `1 − x^d` basis: `m_d = Σ_{d|n} μ(n/d) c_n`.
    pub fn to_onemx(&self) -> Result<CycloProduct> {
        if self.basis == Basis::Onemx {
            return Ok(self.clone());
        }
        let mut exps: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&n, c) in &self.exps {
            for d in divisors(n)? {
                match mobius(n / d)? {
                    0 => {}
                    1 => *exps.entry(d).or_default() += c,
                    _ => *exps.entry(d).or_default() -= c,
                }
            }
        }
        Ok(Self::build(Basis::Onemx, exps))
    }

    /// The product as a truncated power series.
    pub fn to_series(&self, cutoff: &Rational) -> Result<FracSeries> {
        onemx_product(self.to_onemx()?.exps(), cutoff)
    }

    /// The product as a polynomial, defined when it is a polynomial product:
    /// a `Φ`-basis product with non-negative integer exponents.
    pub fn to_polynomial(&self) -> Result<IntPolynomial> {
        let phi = self.to_phi()?;
        let mut acc = IntPolynomial::one();
        for (&d, h) in &phi.exps {
            let Some(k) = h.to_u64() else {
                return domain(format!(
                    "exponent {h} of Phi_{d} is not a non-negative integer"
                ));
            };
            let phi_d = cyclotomic_poly(d)?;
            for _ in 0..k {
                acc = acc.mul(&phi_d);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for CycloProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (i, (d, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            match self.basis {
                Basis::Phi => write!(f, "Phi_{d}")?,
                Basis::Onemx => write!(f, "(1 - x^{d})")?,
            }
            if !e.is_one() {
                write!(f, "^({e})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CycloProduct {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let exps: Vec<(u64, &Rational)> = self.exps.iter().map(|(&d, v)| (d, v)).collect();
        let mut st = serializer.serialize_struct("CycloProduct", 2)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("exps", &exps)?;
        st.end()
    }
}

/// `Φ_n` via `Φ_n = ∏_{d|n} (1 − x^d)^{μ(n/d)}`: multiply the numerator
/// factors, then divide out the denominator ones exactly.
pub fn cyclotomic_poly(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return domain("cyclotomic polynomial index must be positive");
    }
    let mut num = IntPolynomial::one();
    let mut den = Vec::new();
    for d in divisors(n)? {
        match mobius(n / d)? {
            1 => num = num.mul_one_minus_xn(d as usize),
            -1 => den.push(d as usize),
            _ => {}
        }
    }
    for d in den {
        num = num
            .div_one_minus_xn(d)
            .expect("Möbius product divides exactly");
    }
    Ok(num)
}

/// `1 − x^n = ∏_{d|n} Φ_d`.
pub fn onemxn_factor(n: u64) -> Result<CycloProduct> {
    if n == 0 {
        return domain("index must be positive");
    }
    let exps = divisors(n)?
        .into_iter()
        .map(|d| (d, Rational::one()))
        .collect();
    Ok(CycloProduct::build(Basis::Phi, exps))
}

/// `Φ_n = ∏_{d|n} (1 − x^d)^{μ(n/d)}`.
pub fn phi_as_onemx(n: u64) -> Result<CycloProduct> {
    CycloProduct::new(Basis::Phi, BTreeMap::from([(n, Rational::one())]))?.to_onemx()
}

/// `Φ_d(x^a) = ∏ Φ_f(x)` over `d·⟨a|d) | f | a·d`.
pub fn expand_phi_power(d: u64, a: u64) -> Result<CycloProduct> {
    if d == 0 || a == 0 {
        return domain("expand_phi_power needs positive arguments");
    }
    let base = d * angle(a, d);
    let exps = divisors(a * d / base)?
        .into_iter()
        .map(|k| (base * k, Rational::one()))
        .collect();
    Ok(CycloProduct::build(Basis::Phi, exps))
}

fn require_phi(g: &CycloProduct) -> Result<()> {
    if g.basis != Basis::Phi {
        return domain("expected a product over the Phi basis");
    }
    Ok(())
}

/// `g(x^a) = ∏_f Φ_f^{h_{[f/a]}}`.
pub fn substitute_cyclo(g: &CycloProduct, a: u64) -> Result<CycloProduct> {
    require_phi(g)?;
    let mut support = BTreeSet::new();
    for &d in g.exps.keys() {
        support.extend(expand_phi_power(d, a)?.exps.into_keys());
    }
    let exps = support
        .into_iter()
        .map(|f| {
            let idx = bracket_u64(&Rational::new(f, a));
            (f, idx.map(|i| g.get(i)).unwrap_or_default())
        })
        .collect();
    Ok(CycloProduct::build(Basis::Phi, exps))
}

/// `∏_i g(x^{b_i})^{e_i}`, whose exponent at `d` is `Σ_i e_i h_{[d/b_i]}`.
pub fn apply_mform(g: &CycloProduct, m: &MSpec) -> Result<CycloProduct> {
    require_phi(g)?;
    let mut acc = CycloProduct::one(Basis::Phi);
    for &(b, e) in m.pairs() {
        acc = acc.mul(&substitute_cyclo(g, b)?.scale(&Rational::from(e)))?;
    }
    Ok(acc)
}

/// The `N′`-cyclotomic part of `p` together with the leftover factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NprimeSplit {
    pub part: CycloProduct,
    pub residual: IntPolynomial,
}

/// Splits `p = ∏_{d∈N′} Φ_d^{c_d} · R` by repeated exact division, then
/// optionally folds in the `1/(1 − x)` factor (`c_1 −= 1`).
pub fn nprime_split(
    p: &IntPolynomial,
    m: &MSpec,
    include_1mx_inverse: bool,
) -> Result<NprimeSplit> {
    if !p.is_integral() {
        return domain("polynomial must have integer coefficients");
    }
    if !p.constant_term().is_one() {
        return domain("polynomial must satisfy P(0) = 1");
    }
    if p.eval(&Rational::one()).is_zero() {
        return domain("polynomial must satisfy P(1) != 0");
    }
    let deg = p.degree().unwrap_or(0) as u64;
    let mut rest = p.clone();
    let mut exps = BTreeMap::new();
    // φ(d) ≥ √(d/2), so every Φ_d of degree ≤ deg has d ≤ 2·deg².
    for d in 1..=2 * deg * deg {
        if !in_nprime(d, m) || euler_phi(d)? > deg {
            continue;
        }
        let phi = cyclotomic_poly(d)?;
        let mut count = 0u64;
        while let Some(q) = rest.div_exact(&phi) {
            rest = q;
            count += 1;
        }
        if count > 0 {
            exps.insert(d, Rational::from(count));
        }
    }
    if include_1mx_inverse {
        *exps.entry(1).or_default() -= Rational::one();
    }
    Ok(NprimeSplit {
        part: CycloProduct::build(Basis::Phi, exps),
        residual: rest,
    })
}

pub fn nprime_cyclotomic_part(
    p: &IntPolynomial,
    m: &MSpec,
    include_1mx_inverse: bool,
) -> Result<CycloProduct> {
    Ok(nprime_split(p, m, include_1mx_inverse)?.part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn phi_map(pairs: &[(u64, i64)]) -> BTreeMap<u64, Rational> {
        pairs.iter().map(|&(d, v)| (d, q(v, 1))).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(
            cyclotomic_poly(1).unwrap(),
            IntPolynomial::from_ints(&[1, -1])
        );
        assert_eq!(
            cyclotomic_poly(2).unwrap(),
            IntPolynomial::from_ints(&[1, 1])
        );
        assert_eq!(
            cyclotomic_poly(6).unwrap(),
            IntPolynomial::from_ints(&[1, -1, 1])
        );
        assert_eq!(
            cyclotomic_poly(4).unwrap(),
            IntPolynomial::from_ints(&[1, 0, 1])
        );
        assert_eq!(cyclotomic_poly(1).unwrap().to_string(), "1 - x");
        assert!(cyclotomic_poly(0).is_err());
    }

    #[test]
    fn factor_maps() {
        assert_eq!(onemxn_factor(1).unwrap().exps(), &phi_map(&[(1, 1)]));
        assert_eq!(
            onemxn_factor(6).unwrap().exps(),
            &phi_map(&[(1, 1), (2, 1), (3, 1), (6, 1)])
        );
        assert_eq!(phi_as_onemx(1).unwrap().exps(), &phi_map(&[(1, 1)]));
        assert_eq!(
            phi_as_onemx(4).unwrap().exps(),
            &phi_map(&[(2, -1), (4, 1)])
        );
    }

    #[test]
    fn phi_power_examples() {
        assert_eq!(
            expand_phi_power(1, 2).unwrap().exps(),
            &phi_map(&[(1, 1), (2, 1)])
        );
        assert_eq!(expand_phi_power(2, 2).unwrap().exps(), &phi_map(&[(4, 1)]));
    }

    #[test]
    fn substitution_identity_and_single_entry() {
        let g = CycloProduct::new(Basis::Phi, phi_map(&[(2, 3), (5, -1)])).unwrap();
        assert_eq!(substitute_cyclo(&g, 1).unwrap(), g);
        let single = CycloProduct::new(Basis::Phi, phi_map(&[(6, 1)])).unwrap();
        assert_eq!(
            substitute_cyclo(&single, 4).unwrap(),
            expand_phi_power(6, 4).unwrap()
        );
    }

    #[test]
    fn mform_of_one_minus_x() {
        let m: MSpec = "2:1,3:1".parse().unwrap();
        let g = CycloProduct::new(Basis::Phi, phi_map(&[(1, 1)])).unwrap();
        let r = apply_mform(&g, &m).unwrap();
        // (1 − x²)(1 − x³) = Φ1² Φ2 Φ3
        assert_eq!(r.exps(), &phi_map(&[(1, 2), (2, 1), (3, 1)]));
        assert!(apply_mform(&CycloProduct::one(Basis::Phi), &m)
            .unwrap()
            .is_one());
    }

    #[test]
    fn nprime_examples() {
        let m: MSpec = "2:1,3:1".parse().unwrap();
        let part = nprime_cyclotomic_part(&IntPolynomial::one(), &m, true).unwrap();
        assert_eq!(part.exps(), &phi_map(&[(1, -1)]));
        let part = nprime_cyclotomic_part(&IntPolynomial::from_ints(&[1, 1]), &m, true).unwrap();
        assert_eq!(part.exps(), &phi_map(&[(1, -1), (2, 1)]));
        let split = nprime_split(&IntPolynomial::from_ints(&[1, 1, 1]), &m, true).unwrap();
        assert_eq!(split.part.exps(), &phi_map(&[(1, -1), (3, 1)]));
        assert_eq!(split.residual, IntPolynomial::one());
        // Φ5 = 1 + x + x² + x³ + x⁴ is not N′-cyclotomic for b = (2, 3).
        let split = nprime_split(&IntPolynomial::from_ints(&[1, 1, 1, 1, 1]), &m, false).unwrap();
        assert!(split.part.is_one());
        assert!(nprime_split(&IntPolynomial::from_ints(&[1, -1]), &m, true).is_err());
        assert!(nprime_split(&IntPolynomial::from_ints(&[2, 1]), &m, true).is_err());
    }

    #[test]
    fn basis_round_trip() {
        let g = CycloProduct::new(Basis::Onemx, phi_map(&[(2, -1), (6, 2)])).unwrap();
        assert_eq!(g.to_phi().unwrap().to_onemx().unwrap(), g);
    }

    #[test]
    fn json_shape() {
        let g = CycloProduct::new(Basis::Phi, phi_map(&[(1, -1), (3, 1)])).unwrap();
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"basis":"phi","exps":[[1,"-1"],[3,"1"]]}"#
        );
    }
}
