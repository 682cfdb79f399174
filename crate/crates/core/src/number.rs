//! Numbers and truth values.
//!
//! Truth values live in the unit interval. In exact mode they are arbitrary
//! precision rationals, so fixpoint detection is plain equality. In
//! approximate mode they are `f64` and convergence is decided by an
//! epsilon policy in the fixpoint engine.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A number that is either an exact rational or a double.
///
/// Arithmetic between an exact and an approximate operand yields an
/// approximate result. Comparisons across representations are numeric.
#[derive(Clone, Debug)]
pub enum Number {
    Exact(BigRational),
    Approx(f64),
}

impl Number {
    pub fn zero() -> Self {
        Number::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Number::Exact(BigRational::one())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Number::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => rational_to_f64(r),
            Number::Approx(x) => *x,
        }
    }

    pub fn abs(&self) -> Number {
        match self {
            Number::Exact(r) => Number::Exact(r.abs()),
            Number::Approx(x) => Number::Approx(x.abs()),
        }
    }

    /// Division; `None` when the divisor is zero.
    pub fn checked_div(&self, rhs: &Number) -> Option<Number> {
        match (self, rhs) {
            (Number::Exact(a), Number::Exact(b)) => {
                if b.is_zero() {
                    None
                } else {
                    Some(Number::Exact(a / b))
                }
            }
            _ => {
                let d = rhs.to_f64();
                if d == 0.0 {
                    None
                } else {
                    Some(Number::Approx(self.to_f64() / d))
                }
            }
        }
    }

    pub fn min(self, other: Number) -> Number {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Number) -> Number {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

macro_rules! number_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Number> for &'a Number {
            type Output = Number;
            fn $method(self, rhs: &'a Number) -> Number {
                match (self, rhs) {
                    (Number::Exact(a), Number::Exact(b)) => Number::Exact(a $op b),
                    _ => Number::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
    };
}

number_binop!(Add, add, +);
number_binop!(Sub, sub, -);
number_binop!(Mul, mul, *);

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Number::Exact(a), Number::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Number::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Number::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// A truth value: a number in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TruthValue(Number);

impl TruthValue {
    pub fn new(n: Number) -> Result<Self, Error> {
        if let Number::Approx(x) = n {
            if x.is_nan() {
                return Err(Error::OutOfRange(n.to_string()));
            }
        }
        if n < Number::zero() || n > Number::one() {
            return Err(Error::OutOfRange(n.to_string()));
        }
        Ok(TruthValue(n))
    }

    /// Clips a number into the unit interval.
    pub fn clamp(n: Number) -> Self {
        if let Number::Approx(x) = n {
            if x.is_nan() {
                return TruthValue::zero();
            }
        }
        if n < Number::zero() {
            TruthValue::zero()
        } else if n > Number::one() {
            TruthValue::one()
        } else {
            TruthValue(n)
        }
    }

    pub fn zero() -> Self {
        TruthValue(Number::zero())
    }

    pub fn one() -> Self {
        TruthValue(Number::one())
    }

    pub fn half() -> Self {
        TruthValue(Number::ratio(1, 2))
    }

    /// `num/den`; panics unless `0 <= num <= den` and `den > 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den > 0 && 0 <= num && num <= den, "{num}/{den} is not a truth value");
        TruthValue(Number::ratio(num, den))
    }

    pub fn from_rational(r: BigRational) -> Result<Self, Error> {
        TruthValue::new(Number::Exact(r))
    }

    pub fn approx(x: f64) -> Result<Self, Error> {
        TruthValue::new(Number::Approx(x))
    }

    pub fn number(&self) -> &Number {
        &self.0
    }

    pub fn into_number(self) -> Number {
        self.0
    }

    pub fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// The same value as a double.
    pub fn to_approx(&self) -> TruthValue {
        TruthValue(Number::Approx(self.0.to_f64()))
    }

    /// Complement `1 - v`, the default negation.
    pub fn negate(&self) -> TruthValue {
        TruthValue(&Number::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Number::zero()
    }

    pub fn is_one(&self) -> bool {
        self.0 == Number::one()
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &TruthValue) -> Number {
        (&self.0 - &other.0).abs()
    }

    /// Parses `0`, `1`, decimals such as `0.25`, or fractions such as `1/3`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidNumber(text.to_string());
        let r = if let Some((n, d)) = text.split_once('/') {
            let n: BigInt = parse_digits(n).ok_or_else(bad)?;
            let d: BigInt = parse_digits(d).ok_or_else(bad)?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else if let Some((int, frac)) = text.split_once('.') {
            let i: BigInt = parse_digits(int).ok_or_else(bad)?;
            let f: BigInt = parse_digits(frac).ok_or_else(bad)?;
            let scale = num_traits::pow(BigInt::from(10u32), frac.len());
            BigRational::new(i * &scale + f, scale)
        } else {
            BigRational::from_integer(parse_digits(text).ok_or_else(bad)?)
        };
        TruthValue::from_rational(r)
    }

    /// A short decimal rendering, at least one fractional digit (`0.3`, `1.0`).
    pub fn to_decimal_string(&self) -> String {
        let x = self.to_f64();
        let s = format!("{x:.4}");
        let s = s.trim_end_matches('0');
        if s.ends_with('.') {
            format!("{s}0")
        } else {
            s.to_string()
        }
    }

    /// A source-syntax rendering: exact decimal when the rational has one,
    /// otherwise `num/den`.
    pub fn to_source_string(&self) -> String {
        match &self.0 {
            Number::Exact(r) => exact_decimal(r).unwrap_or_else(|| self.0.to_string()),
            Number::Approx(x) => format!("{x}"),
        }
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Terminating decimal expansion of `r`, if any (denominator of form 2^a 5^b).
fn exact_decimal(r: &BigRational) -> Option<String> {
    if r.is_integer() {
        return Some(r.numer().to_string());
    }
    let mut den = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = (r * BigRational::from_integer(scale)).to_integer();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    while s.len() <= digits {
        s.insert(0, '0');
    }
    let split = s.len() - digits;
    let out = format!("{}{}.{}", if neg { "-" } else { "" }, &s[..split], &s[split..]);
    Some(out)
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
