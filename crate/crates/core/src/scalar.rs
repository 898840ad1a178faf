//! Number types shared by the majorization and n-copy code.
//!
//! Lorenz curves, Φ± sums and pair lists are generic over [`Scalar`], which is
//! implemented for `f64` (float mode) and [`BigRational`] (exact mode).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An ordered field we can run Lorenz-curve arithmetic in.
pub trait Scalar: Clone + fmt::Debug + PartialOrd + Num + Signed + Send + Sync {
    /// `num / den` in this field.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_biguint(n: &BigUint) -> Self;
    fn to_f64(&self) -> f64;
    /// Slack allowed when checking that a vector sums to one: zero for exact
    /// arithmetic, `1e-10` for floats.
    fn normalization_tolerance() -> Self;
    /// Default tolerance for curve dominance: `1e-12` exact, `1e-9` float.
    fn dominance_tolerance() -> Self;
    /// Whether the field is exact (rational) arithmetic.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a { b } else { a }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_biguint(n: &BigUint) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn normalization_tolerance() -> Self {
        1e-10
    }
    fn dominance_tolerance() -> Self {
        1e-9
    }
    fn powi(&self, k: u32) -> Self {
        f64::powi(*self, k as i32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_biguint(n: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(n.clone()))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn normalization_tolerance() -> Self {
        BigRational::zero()
    }
    fn dominance_tolerance() -> Self {
        BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)))
    }
}

/// Converts a big rational to the nearest-ish `f64`, also when numerator and
/// denominator individually overflow.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let (sign, ln) = ln_abs_ratio(r);
    if sign == 0 { 0.0 } else { f64::from(sign) * ln.exp() }
}

/// `(sign, ln|r|)` of a rational, accurate even for huge numerators or
/// denominators.
pub fn ln_abs_ratio(r: &BigRational) -> (i8, f64) {
    if r.is_zero() {
        return (0, f64::NEG_INFINITY);
    }
    let sign = if r.is_negative() { -1 } else { 1 };
    (sign, ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude()))
}

/// Natural log of a big unsigned integer.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parses a non-negative or negative rational written either as a fraction
/// (`"3/7"`) or as a finite decimal (`"0.1"`, `"-2.5e-3"`), exactly.
///
/// ```
/// use qudit_magic::scalar::parse_rational;
/// use num_rational::BigRational;
/// assert_eq!(parse_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
/// assert_eq!(parse_rational("3/7").unwrap(), BigRational::new(3.into(), 7.into()));
/// ```
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse { what: "rational number", input: s.to_string() };
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all = format!("{int_part}{frac_part}");
    let num = BigInt::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
