//! Exact rational scalars and the few numeric helpers the kernels share.

use alloc::collections::BTreeMap;
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The scalar every kernel computes with. Arbitrary precision, always reduced.
pub type Rat = num_rational::BigRational;

/// Shorthand for a small integer rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for a small fraction. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Error produced when a string does not denote a rational number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError {
    text: String,
}

impl core::fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "not a rational number: {:?}", self.text)
    }
}

impl core::error::Error for ParseRatError {}

/// Parses `"3"`, `"3.25"`, `"-1.5"`, or `"5/2"` into an exact rational.
///
/// Decimal notation is converted without rounding: `0.2` becomes exactly 1/5.
pub fn parse_rational(text: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError { text: String::from(text) };
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: BigInt = numer.trim().parse().map_err(|_| err())?;
        let d: BigInt = denom.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut numer: BigInt = if whole.is_empty() {
        BigInt::zero()
    } else {
        whole.parse().map_err(|_| err())?
    };
    let mut denom = BigInt::one();
    for digit in frac.bytes() {
        numer = numer * 10 + (digit - b'0');
        denom *= 10;
    }
    Ok(Rat::new(numer * sign, denom))
}

/// Exact sum of many rationals, grouped by reduced denominator.
///
/// Adding terms one by one drags an ever-growing common denominator through
/// every step. Bucketing numerators per denominator first keeps the integer
/// arithmetic small until the final fold, which visits each distinct
/// denominator once in ascending order (so the result is reproducible).
pub fn sum_grouped<I: IntoIterator<Item = Rat>>(terms: I) -> Rat {
    let mut buckets: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    for term in terms {
        let (numer, denom) = term.into();
        *buckets.entry(denom).or_insert_with(BigInt::zero) += numer;
    }
    let mut total = Rat::zero();
    for (denom, numer) in buckets {
        if !numer.is_zero() {
            total += Rat::new(numer, denom);
        }
    }
    total
}

/// Nearest `f64` for report-layer use; exact values never leave the kernels.
pub fn to_f64(value: &Rat) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Renders a rational as a fixed-point decimal with `dp` places, rounding to
/// nearest (ties away from zero). `decimal_string(&rat(7,15) * 100, 2)` is
/// `"46.67"`.
pub fn decimal_string(value: &Rat, dp: u32) -> String {
    let scaled = scale_to_units(value, dp);
    units_to_decimal(&scaled, dp)
}

/// Rounds `value` to an integer count of 10^-dp units, ties away from zero.
pub fn scale_to_units(value: &Rat, dp: u32) -> BigInt {
    let mut pow = BigInt::one();
    for _ in 0..dp {
        pow *= 10;
    }
    let scaled = value * Rat::from_integer(pow);
    let (quot, rem) = scaled.numer().div_rem(scaled.denom());
    let double_rem: BigInt = rem.abs() * 2;
    if double_rem >= scaled.denom().abs() {
        if scaled.is_negative() {
            quot - 1
        } else {
            quot + 1
        }
    } else {
        quot
    }
}

/// Formats an integer count of 10^-dp units as a decimal string.
pub fn units_to_decimal(units: &BigInt, dp: u32) -> String {
    use alloc::string::ToString;
    if dp == 0 {
        return units.to_string();
    }
    let negative = units.is_negative();
    let mut digits = units.abs().to_string();
    let dp = dp as usize;
    if digits.len() <= dp {
        let mut padded = String::from("0".repeat(dp - digits.len() + 1));
        padded.push_str(&digits);
        digits = padded;
    }
    let split = digits.len() - dp;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&digits[..split]);
    out.push('.');
    out.push_str(&digits[split..]);
    out
}

/// Collects per-item exact values into a `Vec`, summing them for a checksum.
pub fn total_of(values: &[Rat]) -> Rat {
    sum_grouped(values.iter().cloned())
}
