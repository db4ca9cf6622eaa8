//! Exact-rational helpers shared by the analysis code and the report/CSV
//! layer: construction from integer counts, `p/q` round-tripping, and
//! fixed-precision decimal rendering.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("cannot parse `{0}` as a rational p/q")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a reduced rational as `p/q`, or just `p` when the value is an
/// integer.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or `-p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, RationalParseError> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .trim()
        .parse()
        .map_err(|_| RationalParseError::Malformed(s.to_string()))?;
    let den: BigInt = den_s
        .trim()
        .parse()
        .map_err(|_| RationalParseError::Malformed(s.to_string()))?;
    if den.is_zero() {
        return Err(RationalParseError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

/// Decimal rendering with `sig` significant digits, round-half-up, trailing
/// zeros trimmed. Deterministic: the same rational always produces the same
/// string.
pub fn decimal_string(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.numer().abs();
    let b = r.denom().abs();

    // decimal exponent e with 10^e <= a/b < 10^(e+1)
    let mut e: i64 = (a.to_string().len() as i64) - (b.to_string().len() as i64);
    loop {
        let fits_lower = if e >= 0 {
            &b * pow10(e as u32) <= a
        } else {
            &a * pow10((-e) as u32) >= b
        };
        if !fits_lower {
            e -= 1;
            continue;
        }
        let fits_upper = if e + 1 >= 0 {
            a < &b * pow10((e + 1) as u32)
        } else {
            &a * pow10((-(e + 1)) as u32) < b
        };
        if !fits_upper {
            e += 1;
            continue;
        }
        break;
    }

    // round(a * 10^(sig-1-e) / b), half-up
    let shift = sig as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (&a * pow10(shift as u32), b.clone())
    } else {
        (a.clone(), &b * pow10((-shift) as u32))
    };
    let mut scaled = (num * 2u32 + &den) / (den * 2u32);
    if scaled == pow10(sig as u32) {
        scaled /= 10u32;
        e += 1;
    }
    let digits = scaled.to_string();
    debug_assert_eq!(digits.len(), sig);

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= sig as i64 {
        out.push_str(&digits);
        for _ in 0..(e + 1 - sig as i64) {
            out.push('0');
        }
    } else if e >= 0 {
        let split = (e + 1) as usize;
        out.push_str(&digits[..split]);
        let frac = digits[split..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-e - 1) {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}
