//! Numeric backends shared by the LP engine and the oracles.
//!
//! Every solver is generic over [`Scalar`]. `f64` runs with a fixed absolute
//! tolerance; [`Rational`] runs exactly with a zero tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Tolerance used by the floating-point backend for feasibility, optimality
/// and termination tests.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True when arithmetic is exact and comparisons use no tolerance.
    const EXACT: bool;

    fn tolerance() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_rational(&self) -> Rational;
    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn near_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }

    /// `self > other` beyond tolerance.
    fn exceeds(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_pos()
    }

    /// Flushes round-off residue to an exact zero. No-op for exact types.
    fn snap(&mut self) {}
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite floating-point value")
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn snap(&mut self) {
        if self.abs() < 1e-12 {
            *self = 0.0;
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        Rational::zero()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn is_neg(&self) -> bool {
        self.is_negative()
    }

    fn near_zero(&self) -> bool {
        self.is_zero()
    }
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Parses `"3"`, `"-0.25"`, `"1/3"` or `"2.5e-1"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], i32::from_str(&s[pos + 1..]).ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Exact decimal rendering when the denominator has only factors 2 and 5.
pub fn format_decimal(r: &Rational) -> Option<String> {
    let mut denom = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10u32), places));
    let digits = scaled.to_integer().abs().to_string();
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if r.is_negative() { "-" } else { "" };
    Some(if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    })
}

/// Renders a rational as a decimal when exact, otherwise as `p/q`.
pub fn format_rational(r: &Rational) -> String {
    format_decimal(r).unwrap_or_else(|| r.to_string())
}

/// Twelve significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let magnitude = rounded.abs().log10().floor() as i32;
    if (-5..=11).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        let s = format!("{rounded:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{rounded:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction_forms() {
        assert_eq!(parse_rational("0.5"), Some(rational(1, 2)));
        assert_eq!(parse_rational("1/2"), Some(rational(1, 2)));
        assert_eq!(parse_rational("-1.25"), Some(rational(-5, 4)));
        assert_eq!(parse_rational("2.5e-1"), Some(rational(1, 4)));
        assert_eq!(parse_rational("3"), Some(rational(3, 1)));
        assert_eq!(parse_rational(".5"), Some(rational(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&rational(1, 2)).as_deref(), Some("0.5"));
        assert_eq!(format_decimal(&rational(-3, 8)).as_deref(), Some("-0.375"));
        assert_eq!(format_decimal(&rational(7, 1)).as_deref(), Some("7"));
        assert_eq!(format_decimal(&rational(1, 3)), None);
        assert_eq!(format_rational(&rational(2, 3)), "2/3");
    }

    #[test]
    fn float_rendering_uses_twelve_digits() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_float(0.49999999999999994), "0.5");
        assert_eq!(format_float(0.0), "0");
    }

    #[test]
    fn tolerance_semantics() {
        assert!(!1e-12f64.is_pos());
        assert!(1e-6f64.is_pos());
        assert!(rational(1, 1_000_000_000_000).is_pos());
        assert!(Rational::zero().near_zero());
    }
}
