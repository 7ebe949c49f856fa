use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A multilinear form `b_0(x_{0,1}+…+x_{0,e_0}) + … + b_m(x_{m,1}+…+x_{m,e_m})`
/// in canonical form: strictly increasing coefficients `b_i`, each with a
/// positive multiplicity `e_i`.
///
/// Immutable once built. The textual form is `"b0:e0,b1:e1,…"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MSpec {
    pairs: Vec<(u64, u64)>,
}

impl MSpec {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain(
                "multilinear form needs at least one pair".into(),
            ));
        }
        if pairs[0].0 == 0 {
            return Err(Error::Domain("coefficients must be positive".into()));
        }
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Domain(format!(
                    "coefficients must be strictly increasing, got {} before {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(b, _)) = pairs.iter().find(|&&(_, e)| e == 0) {
            return Err(Error::Domain(format!(
                "multiplicity of {b} must be positive"
            )));
        }
        Ok(MSpec { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// `b = b_0`.
    pub fn b(&self) -> u64 {
        self.pairs[0].0
    }

    /// `e = e_0`.
    pub fn e(&self) -> u64 {
        self.pairs[0].1
    }

    /// Number of pairs beyond the first one (the `m` of the form).
    pub fn m(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn coefficients(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(b, _)| b)
    }

    /// `θ_i = b_i / b_0` for `i = 1…m`; each is `> 1`.
    pub fn thetas(&self) -> Vec<Rational> {
        self.pairs[1..]
            .iter()
            .map(|&(bi, _)| Rational::new(bi, self.b()))
            .collect()
    }

    /// `ν_i = e_i / e_0` for `i = 1…m`.
    pub fn nus(&self) -> Vec<Rational> {
        self.pairs[1..]
            .iter()
            .map(|&(_, ei)| Rational::new(ei, self.e()))
            .collect()
    }

    /// `Σ e_i`, the total number of summation slots.
    pub fn total_multiplicity(&self) -> u64 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    pub fn gcd_b(&self) -> u64 {
        self.coefficients().fold(0, |g, b| g.gcd(&b))
    }

    /// Distinct primes dividing `b_0 b_1 … b_m`, ascending.
    pub fn prime_support(&self) -> Result<Vec<u64>> {
        let mut primes: Vec<u64> = Vec::new();
        for b in self.coefficients() {
            for (p, _) in crate::arith::factorize(b)? {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort_unstable();
        Ok(primes)
    }
}

impl fmt::Display for MSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (b, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}:{e}")?;
        }
        Ok(())
    }
}

impl FromStr for MSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let item = item.trim();
            let (b, e) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected b:e, got {item:?}")))?;
            let b = b
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coefficient in {item:?}")))?;
            let e = e
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad multiplicity in {item:?}")))?;
            pairs.push((b, e));
        }
        MSpec::new(pairs)
    }
}

impl Serialize for MSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
