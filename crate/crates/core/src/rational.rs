//! Exact rational scalars: parsing, canonical `p/q` rendering and decimal
//! display.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Tokens longer than this are rejected outright.
pub const MAX_TOKEN_LEN: usize = 4096;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `p/q`, a signed integer, or a finite decimal such as `-0.125`.
///
/// Decimals are converted exactly (`0.1` is `1/10`). On failure the error
/// carries the given line and column.
pub fn parse_rational(token: &str, line: usize, column: usize) -> Result<Rational> {
    let fail = |msg: &str| Error::parse(line, column, format!("{msg}: {:?}", abbreviate(token)));
    if token.is_empty() {
        return Err(fail("empty rational token"));
    }
    if token.len() > MAX_TOKEN_LEN {
        return Err(Error::parse(
            line,
            column,
            format!("token longer than {MAX_TOKEN_LEN} bytes"),
        ));
    }
    if let Some((num, den)) = token.split_once('/') {
        let num = parse_integer(num).ok_or_else(|| fail("unparsable rational"))?;
        let den = parse_unsigned(den).ok_or_else(|| fail("unparsable rational"))?;
        if den.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = token.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail("unparsable rational"));
        }
        if whole_digits.len() + 1 < whole.len() || !whole_digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(fail("unparsable rational"));
        }
        let mut digits = String::with_capacity(whole_digits.len() + frac.len());
        digits.push_str(if whole_digits.is_empty() { "0" } else { whole_digits });
        digits.push_str(frac);
        let mut num: BigInt = digits.parse().map_err(|_| fail("unparsable rational"))?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(num, den));
    }
    let n = parse_integer(token).ok_or_else(|| fail("unparsable rational"))?;
    Ok(Rational::from_integer(n))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v: BigInt = digits.parse().ok()?;
    Some(if s.starts_with('-') { -v } else { v })
}

fn parse_unsigned(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn abbreviate(token: &str) -> String {
    if token.chars().count() > 32 {
        let head: String = token.chars().take(32).collect();
        format!("{head}...")
    } else {
        token.to_string()
    }
}

/// Canonical lowest-terms `p/q` form; integers keep the `/1`.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering rounded half away from zero to `places` digits.
/// Display only; never parsed back.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + half()).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
}

/// Least common multiple of the denominators of `values` (1 when empty).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `r * scale` where `scale` is a multiple of `r`'s denominator.
pub fn scaled_integer(r: &Rational, scale: &BigInt) -> BigInt {
    debug_assert!((scale % r.denom()).is_zero());
    r.numer() * (scale / r.denom())
}
