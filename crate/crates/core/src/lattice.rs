//! The exponent lattice `Λ = {F(θ_1,…,θ_m)/b}` with `F` ranging over
//! polynomials with non-negative integer coefficients.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::error::{capacity, domain, Result};
use crate::mspec::MSpec;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    b: u64,
    thetas: Vec<Rational>,
}

impl LatticeSpec {
    pub fn new(b: u64, thetas: Vec<Rational>) -> Result<Self> {
        if b == 0 {
            return domain("lattice base b must be positive");
        }
        for (i, t) in thetas.iter().enumerate() {
            if t <= &Rational::one() {
                return domain(format!("theta {t} must exceed 1"));
            }
            if thetas[..i].contains(t) {
                return domain(format!("theta {t} repeated"));
            }
        }
        Ok(LatticeSpec { b, thetas })
    }

    /// The lattice of `(b_0; θ_1, …, θ_m)` for a multilinear form.
    pub fn from_mspec(m: &MSpec) -> Self {
        LatticeSpec {
            b: m.b(),
            thetas: m.thetas(),
        }
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn thetas(&self) -> &[Rational] {
        &self.thetas
    }

    /// All θ-monomials `θ_{i1}⋯θ_{ik}` not exceeding `limit`, including 1.
    pub fn monomials_below(&self, limit: &Rational) -> Vec<Rational> {
        let mut seen = BTreeSet::new();
        if limit < &Rational::one() {
            return Vec::new();
        }
        let mut queue = vec![Rational::one()];
        seen.insert(Rational::one());
        while let Some(mu) = queue.pop() {
            for t in &self.thetas {
                let next = &mu * t;
                if &next <= limit && seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Sorted elements of `Λ ∩ [0, bound]`.
    pub fn enumerate_below(&self, bound: &Rational) -> Result<Vec<Rational>> {
        if bound.is_negative() {
            return domain("enumeration bound must be non-negative");
        }
        let b = Rational::from(self.b);
        let gens: Vec<Rational> = self
            .monomials_below(&(bound * &b))
            .into_iter()
            .map(|mu| mu / &b)
            .collect();
        let mut grid: u128 = 1;
        for g in &gens {
            let d = g
                .denom()
                .to_u128()
                .ok_or_else(|| crate::Error::Capacity("lattice denominator too large".into()))?;
            grid = lcm_u128(grid, d)
                .ok_or_else(|| crate::Error::Capacity("lattice grid overflows u128".into()))?;
        }
        let to_key =
            |r: &Rational| -> Option<u128> { (r * Rational::from(grid)).floor().to_u128() };
        let Some(limit) = to_key(bound) else {
            return capacity("lattice bound too large for the exponent grid");
        };
        let steps: Vec<u128> = gens.iter().filter_map(to_key).collect();
        let mut found = BTreeSet::from([0u128]);
        let mut work = BTreeSet::from([0u128]);
        while let Some(k) = work.pop_first() {
            for &s in &steps {
                let next = k + s;
                if next <= limit && found.insert(next) {
                    work.insert(next);
                }
            }
        }
        Ok(found.into_iter().map(|k| Rational::new(k, grid)).collect())
    }

    pub fn contains(&self, q: &Rational) -> Result<bool> {
        if q.is_negative() {
            return domain(format!("lattice membership needs q >= 0, got {q}"));
        }
        if q.is_zero() {
            return Ok(true);
        }
        Ok(self.enumerate_below(q)?.binary_search(q).is_ok())
    }
}

pub(crate) fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    let g = gcd_u128(a, b);
    if g == 0 {
        return Some(0);
    }
    (a / g).checked_mul(b)
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
