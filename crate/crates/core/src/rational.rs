//! Exact rationals for generator parameters.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

/// Parses `"a/b"`, `"0.25"`, `"3"` or `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::spec(format!("`{s}` is not a rational number"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().map_err(|_| bad())?;
        let b: i128 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(Error::spec(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(a, b));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let all = format!("{int}{frac}");
    let num: i128 = all.trim_start_matches('0').parse().or_else(|e| {
        if all.chars().all(|c| c == '0') {
            Ok(0)
        } else {
            Err(e)
        }
    }).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let pow = |k: u32| 10i128.checked_pow(k).ok_or_else(|| Error::Precision(format!("`{s}` needs too many digits")));
    let q = if scale >= 0 {
        Q::from_integer(num.checked_mul(pow(scale as u32)?).ok_or_else(bad)?)
    } else {
        Q::new(num, pow((-scale) as u32)?)
    };
    Ok(if neg { -q } else { q })
}

/// A rational written either as a JSON number or as a string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Text(String),
    Number(serde_json::Number),
}

impl RationalInput {
    pub fn to_rational(&self) -> Result<Q> {
        match self {
            RationalInput::Text(s) => parse_rational(s),
            RationalInput::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

impl From<Q> for RationalInput {
    fn from(q: Q) -> Self {
        RationalInput::Text(format_rational(q))
    }
}

pub fn format_rational(q: Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn add(a: Q, b: Q) -> Result<Q> {
    a.checked_add(&b)
        .ok_or_else(|| Error::Precision("rational addition overflowed".into()))
}

pub(crate) fn mul(a: Q, b: Q) -> Result<Q> {
    a.checked_mul(&b)
        .ok_or_else(|| Error::Precision("rational multiplication overflowed".into()))
}

/// `⌊q · 2^level⌋` for `q ≥ 0`.
pub(crate) fn floor_scaled(q: Q, level: u32) -> Result<u64> {
    debug_assert!(q >= Q::zero());
    let num = i128::checked_mul(*q.numer(), 1i128 << level)
        .ok_or_else(|| Error::Precision("cell index overflowed".into()))?;
    Ok((num / q.denom()) as u64)
}
