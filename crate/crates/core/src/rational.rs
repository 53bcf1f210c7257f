//! Arbitrary-precision rational helpers shared by every module.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::EngineError;

pub type Rational = BigRational;

/// Builds `n/d`. Panics on `d == 0`, so only use it with literal denominators.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"`, `"a/b"` or a plain decimal such as `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, EngineError> {
    let s = text.trim();
    let bad = || EngineError::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if s.contains('/') || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole_val: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(whole_val * &scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let value: Rational = s.parse().map_err(|_| bad())?;
    Ok(value)
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Generator of the additive subgroup of Q spanned by `values` (zero if all vanish).
pub fn rational_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        if v.is_zero() {
            continue;
        }
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        Rational::zero()
    } else {
        Rational::new(num, den)
    }
}

pub fn sign(x: &Rational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Exact decimal rendering, rounded half away from zero at `digits` places.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + q(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
}

/// Smallest rational with denominator `2^bits` that is at least `sqrt(x)`.
pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    // ceil(sqrt(x * 4^bits)) / 2^bits
    let scaled = x * Rational::from_integer(scale);
    let ceil_scaled = ceil(&scaled);
    let mut root = ceil_scaled.sqrt();
    while &root * &root < ceil_scaled {
        root += 1;
    }
    Rational::new(root, BigInt::one() << bits)
}

/// Largest rational with denominator `2^bits` that is at most `sqrt(x)`.
pub fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    let scaled = x * Rational::from_integer(scale);
    let root = floor(&scaled).sqrt();
    Rational::new(root, BigInt::one() << bits)
}
