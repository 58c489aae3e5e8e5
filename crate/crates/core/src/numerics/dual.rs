use std::ops::{Add, Div, Mul, Neg, Sub};

use super::complex::Complex;
use super::real::{PrecisionContext, Real};

/// Complex value carried together with its derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<R> {
    pub value: Complex<R>,
    pub derivative: Complex<R>,
}

impl<R: Real> Dual<R> {
    pub fn new(value: Complex<R>, derivative: Complex<R>) -> Self {
        Dual { value, derivative }
    }

    /// The identity at `z`: derivative one.
    pub fn variable(z: Complex<R>) -> Self {
        let d = Complex::one(z.ctx());
        Dual::new(z, d)
    }

    pub fn constant(c: Complex<R>) -> Self {
        let d = Complex::zero(c.ctx());
        Dual::new(c, d)
    }
}

impl<R: Real> Add for Dual<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.value + o.value, self.derivative + o.derivative)
    }
}

impl<R: Real> Sub for Dual<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.value - o.value, self.derivative - o.derivative)
    }
}

impl<R: Real> Mul for Dual<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.value.clone() * o.derivative + self.derivative * o.value.clone();
        Dual::new(self.value * o.value, d)
    }
}

impl<R: Real> Div for Dual<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.value / o.value.clone();
        let d = (self.derivative - q.clone() * o.derivative) / o.value;
        Dual::new(q, d)
    }
}

impl<R: Real> Neg for Dual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.value, -self.derivative)
    }
}

/// Real value with one directional derivative, used to build Jacobian columns.
#[derive(Clone, Debug, PartialEq)]
pub struct RealDual<R> {
    pub value: R,
    pub derivative: R,
}

impl<R: Real> RealDual<R> {
    pub fn new(value: R, derivative: R) -> Self {
        RealDual { value, derivative }
    }
}

impl<R: Real> Add for RealDual<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        RealDual::new(self.value + o.value, self.derivative + o.derivative)
    }
}

impl<R: Real> Sub for RealDual<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        RealDual::new(self.value - o.value, self.derivative - o.derivative)
    }
}

impl<R: Real> Mul for RealDual<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.value.clone() * o.derivative + self.derivative * o.value.clone();
        RealDual::new(self.value * o.value, d)
    }
}

impl<R: Real> Div for RealDual<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.value / o.value.clone();
        let d = (self.derivative - q.clone() * o.derivative) / o.value;
        RealDual::new(q, d)
    }
}

impl<R: Real> Neg for RealDual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        RealDual::new(-self.value, -self.derivative)
    }
}

/// Real field elements that residual functions are written against, so the same
/// code yields plain values or Jacobian columns.
pub trait Scalar<R: Real>:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(r: R) -> Self;
    fn value(&self) -> &R;

    fn powi(&self, n: i32) -> Self {
        let mut acc = Self::lift(self.value().int(1));
        for _ in 0..n.unsigned_abs() {
            acc = acc * self.clone();
        }
        if n < 0 {
            Self::lift(self.value().int(1)) / acc
        } else {
            acc
        }
    }
}

impl<R: Real> Scalar<R> for R {
    fn lift(r: R) -> Self {
        r
    }
    fn value(&self) -> &R {
        self
    }
    fn powi(&self, n: i32) -> Self {
        Real::powi(self, n)
    }
}

impl<R: Real> Scalar<R> for RealDual<R> {
    fn lift(r: R) -> Self {
        let z = r.int(0);
        RealDual::new(r, z)
    }
    fn value(&self) -> &R {
        &self.value
    }
}

/// Complex counterpart of [`Scalar`]: map formulas are written once and evaluated
/// either as plain complex values or with derivatives.
pub trait ComplexScalar<R: Real>:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(c: Complex<R>) -> Self;
    fn value(&self) -> &Complex<R>;
    fn powi(&self, n: i32) -> Self;

    fn ctx(&self) -> PrecisionContext {
        self.value().ctx()
    }
}

impl<R: Real> ComplexScalar<R> for Complex<R> {
    fn lift(c: Complex<R>) -> Self {
        c
    }
    fn value(&self) -> &Complex<R> {
        self
    }
    fn powi(&self, n: i32) -> Self {
        Complex::powi(self, n)
    }
}

impl<R: Real> ComplexScalar<R> for Dual<R> {
    fn lift(c: Complex<R>) -> Self {
        Dual::constant(c)
    }
    fn value(&self) -> &Complex<R> {
        &self.value
    }
    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Dual::constant(Complex::one(self.value.ctx()));
        }
        let pm1 = self.value.powi(n - 1);
        let k = self.value.re.int(n as i64);
        let d = (pm1.clone() * self.derivative.clone()).scale(&k);
        Dual::new(pm1 * self.value.clone(), d)
    }
}
