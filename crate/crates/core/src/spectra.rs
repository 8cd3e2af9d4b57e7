//! Spectra of stable rank 2 reflexive sheaves with `c_1 = 0` on `P^3`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonincreasing integer sequence of length `c_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spectrum(Vec<i64>);

impl Spectrum {
    pub fn new(k: Vec<i64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::Domain("empty spectrum".into()));
        }
        if k.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("spectrum {k:?} is not nonincreasing")));
        }
        Ok(Spectrum(k))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    /// Strict decrease after a strict double descent.
    pub spectrum2: bool,
    /// `(−k_i) = (k_i)` as multisets.
    pub symmetric: bool,
    /// `c_3 = −2 Σ k_i ≥ 0`.
    pub c3_nonneg: bool,
    /// No entry `≥ 1`.
    pub exclude_ge_1: bool,
}

/// Rule broken by a candidate sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumRule {
    PositiveGap,
    NegativeGap,
    NoZeroSingleMinusOne,
    Spectrum2,
    Symmetric,
    C3Negative,
    PositiveEntry,
}

/// First rule `s` violates, if any.
pub fn check_rules(s: &Spectrum, opts: SpectrumOptions) -> Option<SpectrumRule> {
    let k = s.values();
    let has = |v: i64| k.contains(&v);
    let max = k[0];
    let min = *k.last().unwrap();
    if max > 0 && !(0..max).all(has) {
        return Some(SpectrumRule::PositiveGap);
    }
    if min < 0 && !(min + 1..0).all(has) {
        return Some(SpectrumRule::NegativeGap);
    }
    if !has(0) && k.iter().filter(|&&v| v == -1).count() < 2 {
        return Some(SpectrumRule::NoZeroSingleMinusOne);
    }
    if opts.spectrum2 {
        for i in 1..k.len().saturating_sub(1) {
            if 0 >= k[i - 1] && k[i - 1] > k[i] && k[i] > k[i + 1] && k[i + 1..].windows(2).any(|w| w[0] <= w[1]) {
                return Some(SpectrumRule::Spectrum2);
            }
        }
    }
    if opts.symmetric {
        let mut neg: Vec<i64> = k.iter().map(|v| -v).collect();
        neg.sort_unstable_by(|a, b| b.cmp(a));
        if neg != k {
            return Some(SpectrumRule::Symmetric);
        }
    }
    if opts.c3_nonneg && c3_from_spectrum(s) < 0 {
        return Some(SpectrumRule::C3Negative);
    }
    if opts.exclude_ge_1 && max >= 1 {
        return Some(SpectrumRule::PositiveEntry);
    }
    None
}

/// All admissible spectra of length `c` with entries in `[kmin, kmax]`, in
/// descending lexicographic order.
pub fn enumerate_spectra(c: usize, kmin: i64, kmax: i64, opts: SpectrumOptions) -> Result<Vec<Spectrum>> {
    if c == 0 || kmin > kmax {
        return Err(Error::Domain(format!("bad spectrum range c={c}, [{kmin}, {kmax}]")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(c);
    fill(c, kmin, kmax, &mut cur, &mut |k| {
        let s = Spectrum(k.to_vec());
        if check_rules(&s, opts).is_none() {
            out.push(s);
        }
    });
    Ok(out)
}

fn fill(c: usize, kmin: i64, top: i64, cur: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if cur.len() == c {
        emit(cur);
        return;
    }
    for v in (kmin..=top).rev() {
        cur.push(v);
        fill(c, kmin, v, cur, emit);
        cur.pop();
    }
}

/// `h^1(F(l)) = Σ max(0, k_i + l + 2)` for `l ≤ −1`.
pub fn h1_from_spectrum(s: &Spectrum, l: i64) -> Result<i64> {
    if l > -1 {
        return Err(Error::Domain(format!("h1 from the spectrum needs l <= -1, got {l}")));
    }
    Ok(s.values().iter().map(|k| (k + l + 2).max(0)).sum())
}

/// `h^2(F(l)) = Σ max(0, −(k_i + l + 2))` for `l ≥ −3`.
pub fn h2_from_spectrum(s: &Spectrum, l: i64) -> Result<i64> {
    if l < -3 {
        return Err(Error::Domain(format!("h2 from the spectrum needs l >= -3, got {l}")));
    }
    Ok(s.values().iter().map(|k| (-(k + l + 2)).max(0)).sum())
}

pub fn c3_from_spectrum(s: &Spectrum) -> i64 {
    -2 * s.values().iter().sum::<i64>()
}

/// Arithmetic genus `c_3/2 + 1` of the curve attached to a section.
pub fn genus_from_c3(c3: i64) -> Result<i64> {
    if c3 % 2 != 0 {
        return Err(Error::Congruence(format!("c3 = {c3} is odd")));
    }
    Ok(c3 / 2 + 1)
}
