//! Exact rational and polynomial arithmetic, sign evaluation and real-root
//! isolation. Floating point never decides a comparison in here.

pub mod hpr;
pub mod poly;
pub mod ratfun;
pub mod sturm;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

pub fn from_biguint(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

pub fn floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &BigRational) -> BigInt {
    let (q, m) = r.numer().div_mod_floor(r.denom());
    if m.is_zero() {
        q
    } else {
        q + 1
    }
}

/// `r^e` for any integer exponent; `r` must be nonzero when `e < 0`.
pub fn powi(r: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Parses `"P/Q"`, an integer, or a decimal string such as `"11.1"` or
/// `"-2.5e-3"` into an exact rational. Binary floating point is never used.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        input: input.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| err())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let joined = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(joined.parse::<BigInt>().map_err(|_| err())?);
    value /= pow10(frac.len() as i64);
    value *= pow10(exponent);
    Ok(if negative { -value } else { value })
}

pub fn pow10(e: i64) -> BigRational {
    powi(&int(10), e)
}

/// Renders `r` as `"p/q"` (or `"p"` for integers).
pub fn fraction_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of log10 |r| for nonzero r.
fn decimal_exponent(r: &BigRational) -> i64 {
    let a = r.abs();
    // Estimate from digit counts, then correct by exact comparison.
    let est = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let mut e = est;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    e
}

/// Rounds `r` to `digits` significant decimal digits (half away from zero)
/// and renders it in plain positional notation, or scientific notation when
/// the decimal exponent falls outside `[-6, 20]`.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let mut e = decimal_exponent(r);
    let shift = digits as i64 - 1 - e;
    let scaled = r.abs() * pow10(shift);
    let mut m = round_half_away(&scaled);
    if m.to_string().len() as u32 > digits {
        // Rounding carried into a new digit (e.g. 9.99 -> 10.0).
        m /= 10u32;
        e += 1;
    }
    let mut s = m.to_string();
    let sign = if negative { "-" } else { "" };
    if !(-6..=20).contains(&e) {
        let tail = s.split_off(1);
        let tail = tail.trim_end_matches('0');
        return if tail.is_empty() {
            format!("{sign}{s}e{e}")
        } else {
            format!("{sign}{s}.{tail}e{e}")
        };
    }
    let point = e + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), s)
    } else if point as usize >= s.len() {
        format!("{}{}", s, "0".repeat(point as usize - s.len()))
    } else {
        let frac = s.split_off(point as usize);
        format!("{s}.{frac}")
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    format!("{sign}{body}")
}

pub fn round_half_away(r: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = r.numer() * &two + r.denom() * r.numer().signum();
    let d = r.denom() * two;
    // Truncating division after shifting by half a unit toward the sign.
    n / d
}

/// Lossy conversion for diagnostics and plotting only.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
