//! Representation functions `r_M(n, A)`: the number of ordered tuples from
//! `A` solving `n = Σ_i b_i (a_{i,1} + … + a_{i,e_i})`.
//!
//! Sets are always finite prefixes `A ∩ [0, X]` of a possibly infinite set.
//! A representation using an element above `X` has `n > b_0·X`, so counts
//! are exact for `n ≤ b_0·X` (the safe bound) and never reported beyond it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::fps::FracSeries;
use crate::mspec::MSpec;
use crate::rational::Rational;

/// A sorted finite set together with the bound `X` up to which it is known
/// to agree with the intended (possibly infinite) set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedSet {
    bound: u64,
    elements: Vec<u64>,
}

impl BoundedSet {
    pub fn new(elements: impl IntoIterator<Item = u64>, bound: u64) -> Result<Self> {
        let set: BTreeSet<u64> = elements.into_iter().collect();
        if let Some(&top) = set.last() {
            if top > bound {
                return domain(format!("element {top} exceeds the declared bound {bound}"));
            }
        }
        Ok(BoundedSet {
            bound,
            elements: set.into_iter().collect(),
        })
    }

    /// `{0, 1, …, X}`.
    pub fn interval(bound: u64) -> Self {
        BoundedSet {
            bound,
            elements: (0..=bound).collect(),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elements.binary_search(&n).is_ok()
    }

    /// The largest `n` for which counts over this prefix are exact.
    pub fn safe_bound(&self, m: &MSpec) -> Result<u64> {
        m.b()
            .checked_mul(self.bound)
            .ok_or_else(|| Error::Capacity("safe bound overflows u64".into()))
    }

    /// Drops elements above `bound` and lowers the declared bound.
    pub fn restrict(&self, bound: u64) -> Self {
        let bound = bound.min(self.bound);
        BoundedSet {
            bound,
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&a| a <= bound)
                .collect(),
        }
    }

    /// Set file text: a `# bound=X` header, then one element per line.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("# bound={}\n", self.bound);
        for a in &self.elements {
            writeln!(out, "{a}").expect("writing to a String");
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut bound = None;
        let mut elements = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("bound=") {
                    let v = v
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad bound on line {}", i + 1)))?;
                    bound = Some(v);
                }
                continue;
            }
            let a = line
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad element {line:?} on line {}", i + 1)))?;
            if elements.last().is_some_and(|&prev| prev >= a) {
                return Err(Error::Parse(format!(
                    "elements not strictly increasing at line {}",
                    i + 1
                )));
            }
            elements.push(a);
        }
        let bound = bound.ok_or_else(|| Error::Parse("missing '# bound=X' header".into()))?;
        Self::new(elements, bound).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `{Σ ε_i k^{period·i} ≤ X : 0 ≤ ε_i < k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitSet {
    pub k: u64,
    pub period: u32,
    #[serde(flatten)]
    pub set: BoundedSet,
}

pub fn build_digit_set(k: u64, period: u32, bound: u64) -> Result<DigitSet> {
    if k < 2 {
        return domain(format!("digit base must be at least 2, got {k}"));
    }
    if period == 0 {
        return domain("digit period must be positive");
    }
    let mut places = Vec::new();
    let mut place: u64 = 1;
    while place <= bound {
        places.push(place);
        match k
            .checked_pow(period)
            .and_then(|step| place.checked_mul(step))
        {
            Some(next) => place = next,
            None => break,
        }
    }
    let mut elements = vec![0u64];
    for &place in &places {
        let mut next = Vec::with_capacity(elements.len() * k as usize);
        for &base in &elements {
            for digit in 0..k {
                match digit.checked_mul(place).and_then(|v| v.checked_add(base)) {
                    Some(v) if v <= bound => next.push(v),
                    _ => break,
                }
            }
        }
        elements = next;
    }
    elements.sort_unstable();
    Ok(DigitSet {
        k,
        period,
        set: BoundedSet { bound, elements },
    })
}

/// Ruzsa's set: base-4 digits in `{0, 1}`.
pub fn ruzsa_set(bound: u64) -> Result<DigitSet> {
    build_digit_set(2, 2, bound)
}

/// Moser's set: base-`k` digits only at even positions.
pub fn moser_set(k: u64, bound: u64) -> Result<DigitSet> {
    build_digit_set(k, 2, bound)
}

/// `{(1,1), (k,1), …, (k^m,1)}`, the form matched by `build_digit_set(k, m+1, ·)`.
pub fn digit_mspec(k: u64, m: u32) -> Result<MSpec> {
    let mut pairs = Vec::new();
    for i in 0..=m {
        let b = k
            .checked_pow(i)
            .ok_or_else(|| Error::Capacity("coefficient overflows u64".into()))?;
        pairs.push((b, 1));
    }
    MSpec::new(pairs)
}

/// `r_M(n)` for every `n ≤ upto`, by one sparse convolution per slot.
pub fn representation_counts(m: &MSpec, a: &[u64], upto: u64) -> Result<Vec<u128>> {
    let n = usize::try_from(upto).map_err(|_| Error::Capacity("range too large".into()))?;
    let mut acc = vec![0u128; n + 1];
    acc[0] = 1;
    for &(b, e) in m.pairs() {
        let shifts: Vec<usize> = a
            .iter()
            .filter_map(|&x| x.checked_mul(b))
            .filter(|&s| s <= upto)
            .map(|s| s as usize)
            .collect();
        for _ in 0..e {
            let mut next = vec![0u128; n + 1];
            for (i, &c) in acc.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &s in &shifts {
                    let j = i + s;
                    if j > n {
                        break;
                    }
                    next[j] = next[j].checked_add(c).ok_or_else(|| {
                        Error::Capacity("representation count overflows u128".into())
                    })?;
                }
            }
            acc = next;
        }
    }
    Ok(acc)
}

/// `r_M(n)` for a single `n`.
pub fn count_representations(m: &MSpec, a: &[u64], n: u64) -> Result<u128> {
    Ok(representation_counts(m, a, n)?[n as usize])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub m: MSpec,
    pub upto: u64,
    pub safe_bound: u64,
    pub values: Vec<u128>,
    /// Least `n_0 < upto` with `r` constant on `[n_0, upto]`.
    pub constant_from: Option<u64>,
    pub constant_value: Option<u128>,
}

pub fn constancy_scan(m: &MSpec, a: &BoundedSet, upto: u64) -> Result<CountReport> {
    let safe = a.safe_bound(m)?;
    if upto > safe {
        return usage(format!(
            "counts beyond the safe bound b_0*X = {safe} are not determined by the set"
        ));
    }
    let values = representation_counts(m, a.elements(), upto)?;
    let last = values[values.len() - 1];
    let mut start = values.len() - 1;
    while start > 0 && values[start - 1] == last {
        start -= 1;
    }
    let constant_from = (start + 1 < values.len()).then_some(start as u64);
    Ok(CountReport {
        m: m.clone(),
        upto,
        safe_bound: safe,
        constant_value: constant_from.map(|_| last),
        values,
        constant_from,
    })
}

fn generating_product(m: &MSpec, a: &[u64], cutoff: u64) -> Result<FracSeries> {
    let t = Rational::from(cutoff);
    let f = FracSeries::from_terms(
        a.iter()
            .filter(|&&x| x <= cutoff)
            .map(|&x| (Rational::from(x), Rational::one())),
        t.clone(),
    )?;
    let mut prod = FracSeries::one(t.clone())?;
    for &(b, e) in m.pairs() {
        let part = f.substitute_power(&Rational::from(b))?.truncate(&t)?;
        prod = prod.mul(&part.pow_u(e)?)?;
    }
    Ok(prod)
}

/// Whether the coefficients of `∏ f_A(x^{b_i})^{e_i}` match `counts` at
/// every `n ≤ cutoff`.
pub fn generating_check_against(
    m: &MSpec,
    a: &[u64],
    counts: &[u128],
    cutoff: u64,
) -> Result<bool> {
    if counts.len() <= cutoff as usize {
        return usage("not enough counts for the requested cutoff");
    }
    let prod = generating_product(m, a, cutoff)?;
    Ok((0..=cutoff).all(|n| prod.coeff(&Rational::from(n)) == Rational::from(counts[n as usize])))
}

/// The generating-function identity `Σ r_M(n) x^n = ∏ f_A(x^{b_i})^{e_i}`
/// checked up to `cutoff`.
pub fn generating_check(m: &MSpec, a: &BoundedSet, cutoff: u64) -> Result<bool> {
    let safe = a.safe_bound(m)?;
    if cutoff > safe {
        return usage(format!("cutoff {cutoff} exceeds the safe bound {safe}"));
    }
    let counts = representation_counts(m, a.elements(), cutoff)?;
    generating_check_against(m, a.elements(), &counts, cutoff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityEntry {
    pub n: u64,
    pub r: u128,
    pub consistent: bool,
}

/// For `r(n) = #{(a, a′) ∈ A² : a + a′ = n}`, checks that `r(n)` is odd
/// exactly when `n = 2a` with `a ∈ A`.
pub fn parity_check(a: &BoundedSet, upto: u64) -> Result<Vec<ParityEntry>> {
    if upto > a.bound() {
        return usage(format!("parity scan beyond the safe bound {}", a.bound()));
    }
    let m = MSpec::new(vec![(1, 2)])?;
    let counts = representation_counts(&m, a.elements(), upto)?;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(n, r)| {
            let n = n as u64;
            let doubled = n.is_multiple_of(2) && a.contains(n / 2);
            ParityEntry {
                n,
                r,
                consistent: (r % 2 == 1) == doubled,
            }
        })
        .collect())
}

/// Unordered count `#{a ≤ a′ : a + a′ = n}`.
pub fn unordered_pair_count(a: &BoundedSet, n: u64) -> Result<u128> {
    if n > a.bound() {
        return usage(format!("{n} is beyond the safe bound {}", a.bound()));
    }
    let m = MSpec::new(vec![(1, 2)])?;
    let r = count_representations(&m, a.elements(), n)?;
    let diag = u128::from(n.is_multiple_of(2) && a.contains(n / 2));
    Ok((r + diag) / 2)
}
