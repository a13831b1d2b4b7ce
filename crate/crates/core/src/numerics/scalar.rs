//! Scalar values with two interchangeable backends.
//!
//! [`Scalar::Exact`] holds a GMP rational (always canonical: lowest terms,
//! positive denominator). [`Scalar::Float`] holds an MPFR float whose
//! precision is fixed when the value is created. Mixing the two in an
//! operation promotes the exact operand to the float's precision; two floats
//! combine at the larger of their precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Working precision of the float backend when nothing else is requested.
pub const DEFAULT_DIGITS: u32 = 80;

/// Smallest precision the float backend accepts.
pub const MIN_DIGITS: u32 = 50;

/// Guard bits carried on top of the declared decimal precision.
const GUARD_BITS: u32 = 16;

/// Number of bits that carry `digits` significant decimal digits plus guard bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Decimal digits declared by a float of `bits` precision.
pub fn bits_to_digits(bits: u32) -> u32 {
    (f64::from(bits.saturating_sub(GUARD_BITS)) / std::f64::consts::LOG2_10).floor() as u32
}

/// Arithmetic backend selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float { digits: u32 },
}

impl Backend {
    pub fn float_default() -> Self {
        Backend::Float {
            digits: DEFAULT_DIGITS,
        }
    }

    /// Float backend at `digits`, raised to [`MIN_DIGITS`] if lower.
    pub fn float(digits: u32) -> Self {
        Backend::Float {
            digits: digits.max(MIN_DIGITS),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Backend::Exact)
    }

    /// Precision in bits used when this backend produces floats.
    pub fn bits(&self) -> u32 {
        match self {
            Backend::Exact => digits_to_bits(DEFAULT_DIGITS),
            Backend::Float { digits } => digits_to_bits(*digits),
        }
    }

    /// Combine two backends: exact only if both are exact, otherwise the
    /// larger float precision.
    pub fn join(self, other: Backend) -> Backend {
        match (self, other) {
            (Backend::Exact, b) | (b, Backend::Exact) => b,
            (Backend::Float { digits: a }, Backend::Float { digits: b }) => {
                Backend::Float { digits: a.max(b) }
            }
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float { digits } => write!(f, "float({digits})"),
        }
    }
}

/// A real number under one of the two backends.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(Float),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a number (expected an integer, a decimal such as -0.25 or 1e-4, or a ratio p/q)")]
pub struct ParseScalarError(pub String);

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::new())
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator in Scalar::ratio");
        Scalar::Exact(Rational::from((num, den)))
    }

    /// `10^exp`, exactly.
    pub fn pow10(exp: i32) -> Self {
        let base = Rational::from(10);
        Scalar::Exact(Rational::from(base.pow(exp)))
    }

    pub fn from_float(value: Float) -> Self {
        Scalar::Float(value)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(f) => Backend::Float {
                digits: bits_to_digits(f.prec()),
            },
        }
    }

    pub fn precision_bits(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(f) => Some(f.prec()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.cmp0() == Ordering::Equal,
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.cmp0() == Ordering::Less,
            Scalar::Float(f) => f.is_sign_negative() && !f.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && !self.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(f) => f.is_finite(),
        }
    }

    /// The value as an `i64` if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) => {
                if *r.denom() == 1 {
                    r.numer().to_i64()
                } else {
                    None
                }
            }
            Scalar::Float(f) => {
                if f.is_integer() {
                    f.to_integer().and_then(|i| i.to_i64())
                } else {
                    None
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Exact(r) => *r.denom() == 1,
            Scalar::Float(f) => f.is_integer(),
        }
    }

    /// `Some(m)` when the value equals `-m` for an integer `m >= 0`.
    pub fn nonpositive_integer_magnitude(&self) -> Option<u64> {
        if !self.is_integer() || self.is_positive() {
            return None;
        }
        match self {
            Scalar::Exact(r) => r.numer().to_u64().or_else(|| {
                let m = Integer::from(-r.numer());
                m.to_u64()
            }),
            Scalar::Float(f) => f
                .to_integer()
                .and_then(|i| Integer::from(-i).to_u64()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(f) => f.to_f64(),
        }
    }

    /// The value as a float of `bits` precision (rounded to nearest).
    pub fn to_float(&self, bits: u32) -> Float {
        match self {
            Scalar::Exact(r) => Float::with_val(bits, r),
            Scalar::Float(f) => Float::with_val(bits, f),
        }
    }

    /// Re-express the value under `backend`.
    ///
    /// Conversion to [`Backend::Exact`] is lossless for float inputs (every
    /// binary float is a rational).
    pub fn with_backend(&self, backend: Backend) -> Scalar {
        match backend {
            Backend::Exact => match self {
                Scalar::Exact(_) => self.clone(),
                Scalar::Float(f) => Scalar::Exact(
                    f.to_rational()
                        .expect("non-finite float cannot become exact"),
                ),
            },
            Backend::Float { .. } => Scalar::Float(self.to_float(backend.bits())),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(Rational::from(r.abs_ref())),
            Scalar::Float(f) => Scalar::Float(Float::with_val(f.prec(), f.abs_ref())),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// `1/self`, or `None` if the value is zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(Rational::from(r.recip_ref())),
            Scalar::Float(f) => Scalar::Float(Float::with_val(f.prec(), f.recip_ref())),
        })
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.recip().map(|inv| self * &inv)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn powi(&self, exp: i64) -> Option<Scalar> {
        if exp < 0 && self.is_zero() {
            return None;
        }
        let e = i32::try_from(exp).ok()?;
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(Rational::from(r.pow(e))),
            Scalar::Float(f) => Scalar::Float(Float::with_val(f.prec(), f.pow(e))),
        })
    }

    /// Real power `self^exp` for a positive base. Exact when the exponent is
    /// an exact integer and the base is exact; float otherwise, at the larger
    /// operand precision (or `fallback_bits` if both are exact).
    pub fn powf(&self, exp: &Scalar, fallback_bits: u32) -> Option<Scalar> {
        if let (Scalar::Exact(_), Some(e)) = (self, exp.exact_integer()) {
            return self.powi(e);
        }
        if !self.is_positive() {
            return None;
        }
        let bits = self.float_bits_with(exp, fallback_bits);
        let base = self.to_float(bits);
        let e = exp.to_float(bits);
        Some(Scalar::Float(Float::with_val(bits, base.pow(&e))))
    }

    pub fn exp(&self, fallback_bits: u32) -> Scalar {
        let bits = self.precision_bits().unwrap_or(fallback_bits);
        if self.is_zero() && self.is_exact() {
            return Scalar::one();
        }
        Scalar::Float(self.to_float(bits).exp())
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self, fallback_bits: u32) -> Option<Scalar> {
        if !self.is_positive() {
            return None;
        }
        let bits = self.precision_bits().unwrap_or(fallback_bits);
        Some(Scalar::Float(self.to_float(bits).ln()))
    }

    fn exact_integer(&self) -> Option<i64> {
        match self {
            Scalar::Exact(_) => self.to_i64(),
            Scalar::Float(_) => None,
        }
    }

    fn float_bits_with(&self, other: &Scalar, fallback: u32) -> u32 {
        match (self.precision_bits(), other.precision_bits()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => fallback,
        }
    }

    /// `|self - other| / max(|self|, |other|)`, zero when both vanish.
    pub fn rel_diff(&self, other: &Scalar) -> Scalar {
        let scale = {
            let a = self.abs();
            let b = other.abs();
            if a >= b {
                a
            } else {
                b
            }
        };
        if scale.is_zero() {
            return Scalar::zero();
        }
        (self - other).abs().checked_div(&scale).unwrap()
    }

    /// Exact decimal or ratio parser: `"3"`, `"-0.25"`, `"1e-4"`, `"3/2"`.
    pub fn parse(text: &str) -> Result<Scalar, ParseScalarError> {
        let err = || ParseScalarError(text.to_string());
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            let n = parse_decimal(num.trim()).ok_or_else(err)?;
            let d = parse_decimal(den.trim()).ok_or_else(err)?;
            if d.cmp0() == Ordering::Equal {
                return Err(err());
            }
            Ok(Scalar::Exact(n / d))
        } else {
            parse_decimal(t).map(Scalar::Exact).ok_or_else(err)
        }
    }

    fn binary(&self, rhs: &Scalar, op: BinOp) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(match op {
                BinOp::Add => Rational::from(a + b),
                BinOp::Sub => Rational::from(a - b),
                BinOp::Mul => Rational::from(a * b),
                BinOp::Div => Rational::from(a / b),
            }),
            _ => {
                let bits = self.float_bits_with(rhs, digits_to_bits(DEFAULT_DIGITS));
                let a = self.to_float(bits);
                let b = rhs.to_float(bits);
                Scalar::Float(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                })
            }
        }
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn parse_decimal(t: &str) -> Option<Rational> {
    if t.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(Integer::from_str(&all_digits).ok()?);
    let scale = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    value *= Rational::from(Rational::from(10).pow(scale));
    if negative {
        value = -value;
    }
    Some(value)
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse(s)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Exact(Rational::from(v))
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::Exact(Rational::from(v))
    }
}

impl From<u32> for Scalar {
    fn from(v: u32) -> Self {
        Scalar::Exact(Rational::from(v))
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::Exact(Rational::from(v))
    }
}

impl From<Integer> for Scalar {
    fn from(v: Integer) -> Self {
        Scalar::Exact(Rational::from(v))
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Exact(v)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Float(a), Scalar::Exact(b)) | (Scalar::Exact(b), Scalar::Float(a)) => *a == *b,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Exact(a), Scalar::Float(b)) => b.partial_cmp(a).map(Ordering::reverse),
        }
    }
}

impl fmt::Display for Scalar {
    /// Exact values print as `p/q` (or `p`); floats print with as many
    /// significant digits as their precision declares.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => {
                let digits = bits_to_digits(x.prec()).max(1) as usize;
                f.write_str(&x.to_string_radix(10, Some(digits)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.binary(rhs, $op)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.binary(&rhs, $op)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.binary(rhs, $op)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.binary(&rhs, $op)
            }
        }
        impl $trait<i64> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i64) -> Scalar {
                self.binary(&Scalar::from(rhs), $op)
            }
        }
        impl<'a> $trait<i64> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i64) -> Scalar {
                self.binary(&Scalar::from(rhs), $op)
            }
        }
    };
}

forward_binop!(Add, add, BinOp::Add);
forward_binop!(Sub, sub, BinOp::Sub);
forward_binop!(Mul, mul, BinOp::Mul);
// Exact division by zero panics; use `checked_div` where the divisor may vanish.
forward_binop!(Div, div, BinOp::Div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}
