//! Truncated fractional power series `Σ c_λ x^λ` with rational exponents.
//!
//! A [`FracSeries`] is complete up to its cutoff `T`: every coefficient with
//! exponent `≤ T` is exact, nothing above `T` is stored. Binary operations
//! require equal cutoffs; [`FracSeries::substitute_power`] and
//! [`FracSeries::truncate`] are the only ways to change it.
//!
//! Internally exponents live on a grid `k / denom` with `k: u128`, where
//! `denom` is the least common denominator of the stored exponents. This
//! keeps the hot loops in machine integers while staying exact.

mod analytic;
mod product;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use product::{
    onemx_power, onemx_product, product_truncated, ramanujan_tau, recover_product_exponents,
};

use crate::error::{capacity, domain, usage, Error, Result};
use crate::lattice::{gcd_u128, lcm_u128};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct FracSeries {
    cutoff: Rational,
    denom: u128,
    terms: BTreeMap<u128, Rational>,
}

/// Order of a truncated series: the least exponent carrying a nonzero
/// coefficient, or `Infinite` when every kept coefficient vanishes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesOrder {
    Finite(Rational),
    Infinite,
}

impl SeriesOrder {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            SeriesOrder::Finite(r) => Some(r),
            SeriesOrder::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SeriesOrder::Infinite)
    }
}

impl fmt::Display for SeriesOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesOrder::Finite(r) => write!(f, "{r}"),
            SeriesOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// The non-archimedean absolute value `|f| = β^{ord f}` with `β = 1/2`.
///
/// Orders are rational, so `β^{ord f}` is generally irrational; the value is
/// therefore carried as its order and compared through it. Larger order
/// means smaller absolute value, and the zero series has value 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    order: SeriesOrder,
}

impl Valuation {
    pub const BETA: (i64, i64) = (1, 2);

    pub fn from_order(order: SeriesOrder) -> Self {
        Valuation { order }
    }

    pub fn zero() -> Self {
        Valuation {
            order: SeriesOrder::Infinite,
        }
    }

    pub fn order(&self) -> &SeriesOrder {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.order.is_infinite()
    }

    /// `|f|·|g|`, i.e. the sum of orders.
    pub fn mul(&self, other: &Valuation) -> Valuation {
        match (&self.order, &other.order) {
            (SeriesOrder::Finite(a), SeriesOrder::Finite(b)) => Valuation {
                order: SeriesOrder::Finite(a + b),
            },
            _ => Valuation::zero(),
        }
    }

    /// The exact value when it is rational: the order is an integer or the
    /// series is zero.
    pub fn to_rational(&self) -> Option<Rational> {
        match &self.order {
            SeriesOrder::Infinite => Some(Rational::zero()),
            SeriesOrder::Finite(r) => {
                let k = r.to_i64()?;
                let beta = Rational::new(Self::BETA.0, Self::BETA.1);
                Some(beta.pow(i32::try_from(k).ok()?))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.order {
            SeriesOrder::Infinite => 0.0,
            SeriesOrder::Finite(r) => 0.5f64.powf(r.to_f64()),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        other.order.cmp(&self.order)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.order, self.to_rational()) {
            (SeriesOrder::Infinite, _) => f.write_str("0"),
            (_, Some(r)) => write!(f, "{r}"),
            (SeriesOrder::Finite(r), None) => write!(f, "(1/2)^({r})"),
        }
    }
}

fn floor_u128(r: &Rational) -> Result<u128> {
    r.floor()
        .to_u128()
        .ok_or_else(|| Error::Capacity(format!("{r} does not fit the exponent grid")))
}

fn grid_key(exp: &Rational, denom: u128) -> Result<u128> {
    let k = exp * Rational::from(denom);
    if !k.is_integer() {
        return domain(format!("exponent {exp} is not on the grid 1/{denom}"));
    }
    floor_u128(&k)
}

fn denom_u128(r: &Rational) -> Result<u128> {
    r.denom()
        .to_u128()
        .ok_or_else(|| Error::Capacity(format!("exponent denominator of {r} too large")))
}

fn checked_lcm(a: u128, b: u128) -> Result<u128> {
    lcm_u128(a, b).ok_or_else(|| Error::Capacity("exponent grid overflows u128".into()))
}

/// Coefficients keyed by numerator over a shared exponent denominator.
type Grid = BTreeMap<u128, Rational>;

impl FracSeries {
    /// Assembles a series from grid data, dropping zero coefficients and
    /// reducing the grid to the coarsest one that holds every exponent.
    fn from_grid(cutoff: Rational, denom: u128, terms: BTreeMap<u128, Rational>) -> Self {
        let mut terms = terms;
        terms.retain(|_, c| !c.is_zero());
        let g = terms.keys().fold(denom, |g, &k| gcd_u128(g, k));
        let (denom, terms) = if terms.is_empty() {
            (1, terms)
        } else if g > 1 {
            (
                denom / g,
                terms.into_iter().map(|(k, c)| (k / g, c)).collect(),
            )
        } else {
            (denom, terms)
        };
        FracSeries {
            cutoff,
            denom,
            terms,
        }
    }

    fn check_cutoff(cutoff: &Rational) -> Result<()> {
        if cutoff.is_negative() {
            return domain(format!("cutoff must be non-negative, got {cutoff}"));
        }
        Ok(())
    }

    pub fn zero(cutoff: Rational) -> Result<Self> {
        Self::check_cutoff(&cutoff)?;
        Ok(FracSeries {
            cutoff,
            denom: 1,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(c: Rational, cutoff: Rational) -> Result<Self> {
        Self::check_cutoff(&cutoff)?;
        Ok(Self::from_grid(cutoff, 1, BTreeMap::from([(0, c)])))
    }

    pub fn one(cutoff: Rational) -> Result<Self> {
        Self::constant(Rational::one(), cutoff)
    }

    /// `c·x^exp`, or zero when `exp` exceeds the cutoff.
    pub fn monomial(c: Rational, exp: Rational, cutoff: Rational) -> Result<Self> {
        Self::from_terms([(exp, c)], cutoff)
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed; exponents above the cutoff are dropped.
    pub fn from_terms<I>(terms: I, cutoff: Rational) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        Self::check_cutoff(&cutoff)?;
        let terms: Vec<(Rational, Rational)> = terms
            .into_iter()
            .filter(|(e, c)| e <= &cutoff && !c.is_zero())
            .collect();
        let mut denom = 1u128;
        for (e, _) in &terms {
            if e.is_negative() {
                return domain(format!("negative exponent {e}"));
            }
            denom = checked_lcm(denom, denom_u128(e)?)?;
        }
        let mut grid: BTreeMap<u128, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *grid.entry(grid_key(&e, denom)?).or_default() += c;
        }
        Ok(Self::from_grid(cutoff, denom, grid))
    }

    /// `Σ coeffs[n] x^n` truncated at the cutoff.
    pub fn from_dense(coeffs: &[Rational], cutoff: Rational) -> Result<Self> {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| (Rational::from(n), c.clone())),
            cutoff,
        )
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    /// Number of nonzero coefficients kept.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`FracSeries::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)`, by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        let d = self.denom;
        self.terms
            .iter()
            .map(move |(&k, c)| (Rational::new(k, d), c))
    }

    pub fn coeff(&self, exp: &Rational) -> Rational {
        let k = exp * Rational::from(self.denom);
        if !k.is_integer() || k.is_negative() {
            return Rational::zero();
        }
        k.numer()
            .to_u128()
            .and_then(|k| self.terms.get(&k).cloned())
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&0).cloned().unwrap_or_default()
    }

    /// Least common denominator of the stored exponents.
    pub fn exponent_denominator(&self) -> u128 {
        self.denom
    }

    /// Whether every exponent has a denominator dividing some power of `b`.
    pub fn exponents_in_qb(&self, b: u64) -> bool {
        let b = b as u128;
        let mut d = self.denom;
        loop {
            let g = gcd_u128(d, b);
            if g <= 1 {
                return d == 1;
            }
            d /= g;
        }
    }

    pub fn has_only_integer_exponents(&self) -> bool {
        self.denom == 1
    }

    fn limit(&self) -> Result<u128> {
        self.limit_on(self.denom)
    }

    fn limit_on(&self, denom: u128) -> Result<u128> {
        floor_u128(&(&self.cutoff * Rational::from(denom)))
    }

    fn rescaled(&self, denom: u128) -> Result<BTreeMap<u128, Rational>> {
        debug_assert_eq!(denom % self.denom, 0);
        let factor = denom / self.denom;
        self.terms
            .iter()
            .map(|(&k, c)| {
                k.checked_mul(factor)
                    .map(|k| (k, c.clone()))
                    .ok_or_else(|| Error::Capacity("exponent grid overflows u128".into()))
            })
            .collect()
    }

    fn same_cutoff(&self, other: &FracSeries) -> Result<()> {
        if self.cutoff != other.cutoff {
            return usage(format!(
                "series cutoffs differ: {} vs {}",
                self.cutoff, other.cutoff
            ));
        }
        Ok(())
    }

    fn aligned(&self, other: &FracSeries) -> Result<(u128, Grid, Grid)> {
        self.same_cutoff(other)?;
        let denom = checked_lcm(self.denom, other.denom)?;
        Ok((denom, self.rescaled(denom)?, other.rescaled(denom)?))
    }

    pub fn add(&self, other: &FracSeries) -> Result<FracSeries> {
        let (denom, mut a, b) = self.aligned(other)?;
        for (k, c) in b {
            *a.entry(k).or_default() += c;
        }
        Ok(Self::from_grid(self.cutoff.clone(), denom, a))
    }

    pub fn sub(&self, other: &FracSeries) -> Result<FracSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FracSeries {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> FracSeries {
        let terms = self.terms.iter().map(|(&k, v)| (k, v * c)).collect();
        Self::from_grid(self.cutoff.clone(), self.denom, terms)
    }

    /// Cauchy product restricted to exponents `≤ T`.
    pub fn mul(&self, other: &FracSeries) -> Result<FracSeries> {
        let (denom, a, b) = self.aligned(other)?;
        let limit = self.limit_on(denom)?;
        let b: Vec<(u128, Rational)> = b.into_iter().collect();
        let mut acc: HashMap<u128, Rational> = HashMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let k = ka + kb;
                if k > limit {
                    break;
                }
                let term = ca * cb;
                match acc.get_mut(&k) {
                    Some(v) => *v += term,
                    None => {
                        acc.insert(k, term);
                    }
                }
            }
        }
        Ok(Self::from_grid(
            self.cutoff.clone(),
            denom,
            acc.into_iter().collect(),
        ))
    }

    /// `f^n` for a non-negative integer `n`, by repeated squaring.
    pub fn pow_u(&self, n: u64) -> Result<FracSeries> {
        let mut result = FracSeries::one(self.cutoff.clone())?;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn order(&self) -> SeriesOrder {
        match self.terms.keys().next() {
            Some(&k) => SeriesOrder::Finite(Rational::new(k, self.denom)),
            None => SeriesOrder::Infinite,
        }
    }

    pub fn valuation(&self) -> Valuation {
        Valuation::from_order(self.order())
    }

    /// Drops every term above `cutoff`, which may not exceed the current one.
    pub fn truncate(&self, cutoff: &Rational) -> Result<FracSeries> {
        if cutoff > &self.cutoff {
            return usage(format!(
                "cannot extend cutoff {} to {cutoff} by truncation",
                self.cutoff
            ));
        }
        Self::check_cutoff(cutoff)?;
        let limit = floor_u128(&(cutoff * Rational::from(self.denom)))?;
        let terms = self
            .terms
            .range(..=limit)
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        Ok(Self::from_grid(cutoff.clone(), self.denom, terms))
    }

    /// `f(x^ρ)`: every exponent and the cutoff are multiplied by `ρ`.
    pub fn substitute_power(&self, rho: &Rational) -> Result<FracSeries> {
        if !rho.is_positive() {
            return domain(format!("substitution power must be positive, got {rho}"));
        }
        let (Some(r), Some(s)) = (rho.numer().to_u128(), rho.denom().to_u128()) else {
            return capacity(format!("substitution power {rho} too large"));
        };
        let denom = self
            .denom
            .checked_mul(s)
            .ok_or_else(|| Error::Capacity("exponent grid overflows u128".into()))?;
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let k = k
                .checked_mul(r)
                .ok_or_else(|| Error::Capacity("exponent grid overflows u128".into()))?;
            terms.insert(k, c.clone());
        }
        Ok(Self::from_grid(&self.cutoff * rho, denom, terms))
    }

    /// `x·f′`: the coefficient at `λ` becomes `λ·c_λ`.
    pub fn xderive(&self) -> FracSeries {
        let d = Rational::from(self.denom);
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| (k, c * Rational::from(k) / &d))
            .collect();
        Self::from_grid(self.cutoff.clone(), self.denom, terms)
    }

    /// `x·f′/f`.
    pub fn log_derivative(&self) -> Result<FracSeries> {
        if self.constant_term().is_zero() {
            return Err(Error::NotInvertible(
                "logarithmic derivative needs f(0) != 0".into(),
            ));
        }
        self.xderive().mul(&self.invert()?)
    }

    /// Whether both series agree on every exponent `≤ cutoff`.
    pub fn equals_up_to(&self, other: &FracSeries, cutoff: &Rational) -> Result<bool> {
        Ok(self.truncate(cutoff)? == other.truncate(cutoff)?)
    }
}

/// `x`, `x^2`, `x^(1/2)`.
struct Power<'a>(&'a Rational);

impl fmt::Display for Power<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.0.is_one(), self.0.is_integer()) {
            (true, _) => f.write_str("x"),
            (false, true) => write!(f, "x^{}", self.0),
            (false, false) => write!(f, "x^({})", self.0),
        }
    }
}

/// Terms up to the cutoff are exact, so the remainder is written `o(x^T)`.
impl fmt::Display for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + o({})", Power(&self.cutoff));
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (e.is_zero(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", Power(&e))?,
                (false, false) => write!(f, "{mag}*{}", Power(&e))?,
            }
        }
        write!(f, " + o({})", Power(&self.cutoff))
    }
}

impl fmt::Debug for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FracSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Rational, &Rational)> = self.terms().collect();
        let mut st = serializer.serialize_struct("FracSeries", 2)?;
        st.serialize_field("cutoff", &self.cutoff)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for FracSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            cutoff: Rational,
            terms: Vec<(Rational, Rational)>,
        }
        let r = Repr::deserialize(deserializer)?;
        FracSeries::from_terms(r.terms, r.cutoff).map_err(serde::de::Error::custom)
    }
}
