use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::NumericsError;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 8;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub significant_digits: u32,
}

impl PrecisionContext {
    pub const DOUBLE: PrecisionContext = PrecisionContext { significant_digits: 15 };
    pub const SOLVER_DEFAULT: PrecisionContext = PrecisionContext { significant_digits: 50 };
    pub const SOLVER_MIN_DIGITS: u32 = 40;

    pub fn new(significant_digits: u32) -> Result<Self, NumericsError> {
        if significant_digits < 15 {
            return Err(NumericsError::PrecisionTooLow(significant_digits));
        }
        Ok(PrecisionContext { significant_digits })
    }

    pub fn bits(&self) -> u32 {
        (self.significant_digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    fn from_bits(bits: u32) -> Self {
        let d = ((bits.saturating_sub(GUARD_BITS)) as f64 / LOG2_10).floor() as u32;
        PrecisionContext { significant_digits: d.max(1) }
    }

    /// Digits needed to print a value so that parsing it back is exact.
    pub fn roundtrip_digits(&self) -> usize {
        (self.bits() as f64 / LOG2_10).ceil() as usize + 2
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::SOLVER_DEFAULT
    }
}

/// Real scalar at some working precision. Implemented for `f64` (render paths)
/// and `rug::Float` (solver and certificate paths).
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64, ctx: PrecisionContext) -> Self;
    fn from_i64(n: i64, ctx: PrecisionContext) -> Self;
    fn from_mp(x: &Float, ctx: PrecisionContext) -> Self;
    fn parse_decimal(s: &str, ctx: PrecisionContext) -> Result<Self, NumericsError>;
    fn pi(ctx: PrecisionContext) -> Self;

    fn ctx(&self) -> PrecisionContext;
    fn to_f64(&self) -> f64;
    fn to_mp(&self, ctx: PrecisionContext) -> Float;
    fn to_decimal(&self, digits: usize) -> String;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;

    /// 10^-digits at the value's own precision.
    fn epsilon(ctx: PrecisionContext) -> Self;

    fn cst(&self, x: f64) -> Self {
        Self::from_f64(x, self.ctx())
    }

    fn int(&self, n: i64) -> Self {
        Self::from_i64(n, self.ctx())
    }

    fn ratio(p: i64, q: i64, ctx: PrecisionContext) -> Self {
        Self::from_i64(p, ctx) / Self::from_i64(q, ctx)
    }

    fn powi(&self, n: i32) -> Self {
        let mut base = self.clone();
        let mut acc = self.int(1);
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        if n < 0 {
            self.int(1) / acc
        } else {
            acc
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64, _: PrecisionContext) -> Self {
        x
    }
    fn from_i64(n: i64, _: PrecisionContext) -> Self {
        n as f64
    }
    fn from_mp(x: &Float, _: PrecisionContext) -> Self {
        x.to_f64()
    }
    fn parse_decimal(s: &str, _: PrecisionContext) -> Result<Self, NumericsError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| NumericsError::Parse(s.to_string()))
    }
    fn pi(_: PrecisionContext) -> Self {
        std::f64::consts::PI
    }
    fn ctx(&self) -> PrecisionContext {
        PrecisionContext::DOUBLE
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_mp(&self, ctx: PrecisionContext) -> Float {
        Float::with_val(ctx.bits(), *self)
    }
    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn epsilon(_: PrecisionContext) -> Self {
        f64::EPSILON
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
}

impl Real for Float {
    fn from_f64(x: f64, ctx: PrecisionContext) -> Self {
        Float::with_val(ctx.bits(), x)
    }
    fn from_i64(n: i64, ctx: PrecisionContext) -> Self {
        Float::with_val(ctx.bits(), n)
    }
    fn from_mp(x: &Float, ctx: PrecisionContext) -> Self {
        Float::with_val(ctx.bits(), x)
    }
    fn parse_decimal(s: &str, ctx: PrecisionContext) -> Result<Self, NumericsError> {
        let p = Float::parse(s.trim()).map_err(|_| NumericsError::Parse(s.to_string()))?;
        Ok(Float::with_val(ctx.bits(), p))
    }
    fn pi(ctx: PrecisionContext) -> Self {
        Float::with_val(ctx.bits(), Constant::Pi)
    }
    fn ctx(&self) -> PrecisionContext {
        PrecisionContext::from_bits(self.prec())
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
    fn to_mp(&self, ctx: PrecisionContext) -> Float {
        Float::with_val(ctx.bits(), self)
    }
    fn to_decimal(&self, digits: usize) -> String {
        self.to_string_radix(10, Some(digits.max(2)))
    }
    fn abs(&self) -> Self {
        self.clone().abs()
    }
    fn sqrt(&self) -> Self {
        self.clone().sqrt()
    }
    fn exp(&self) -> Self {
        self.clone().exp()
    }
    fn ln(&self) -> Self {
        self.clone().ln()
    }
    fn sin(&self) -> Self {
        self.clone().sin()
    }
    fn cos(&self) -> Self {
        self.clone().cos()
    }
    fn atan2(&self, x: &Self) -> Self {
        self.clone().atan2(x)
    }
    fn powf(&self, e: &Self) -> Self {
        self.clone().pow(e)
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn epsilon(ctx: PrecisionContext) -> Self {
        let ten = Float::with_val(ctx.bits(), 10);
        ten.pow(-(ctx.significant_digits as i32))
    }
    fn powi(&self, n: i32) -> Self {
        self.clone().pow(n)
    }
}

/// Convenience constructor for multiprecision values.
pub fn mp(x: f64, ctx: PrecisionContext) -> Float {
    Float::with_val(ctx.bits(), x)
}

pub fn mp_parse(s: &str, ctx: PrecisionContext) -> Result<Float, NumericsError> {
    <Float as Real>::parse_decimal(s, ctx)
}
