use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::{PrecisionContext, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    pub fn real(re: R) -> Self {
        let im = re.int(0);
        Complex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, ctx: PrecisionContext) -> Self {
        Complex::new(R::from_f64(re, ctx), R::from_f64(im, ctx))
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Complex::from_f64(0.0, 0.0, ctx)
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Complex::from_f64(1.0, 0.0, ctx)
    }

    pub fn from_polar(r: &R, theta: &R) -> Self {
        Complex::new(r.clone() * theta.cos(), r.clone() * theta.sin())
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.re.ctx()
    }

    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> R {
        // hypot without overflow for the double path
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let q = small / big.clone();
        big * (q.clone() * q + self.re.int(1)).sqrt()
    }

    pub fn arg(&self) -> R {
        self.im.atan2(&self.re)
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, k: &R) -> Self {
        Complex::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(self.re.clone() / n.clone(), -self.im.clone() / n)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn powi(&self, n: i32) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::one(self.ctx());
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
            acc.recip()
        } else {
            acc
        }
    }

    /// Principal power with real exponent.
    pub fn powf(&self, e: &R) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs().powf(e);
        let t = self.arg() * e.clone();
        Complex::from_polar(&r, &t)
    }

    pub fn to_f64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn convert<S: Real>(&self, ctx: PrecisionContext) -> Complex<S> {
        let c = self.ctx();
        Complex::new(
            S::from_mp(&self.re.to_mp(c), ctx),
            S::from_mp(&self.im.to_mp(c), ctx),
        )
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Complex::new(re, im)
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sqr();
        let re = self.re.clone() * o.re.clone() + self.im.clone() * o.im.clone();
        let im = self.im * o.re - self.re * o.im;
        Complex::new(re / n.clone(), im / n)
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: Real + fmt::Display> fmt::Display for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<R> {
    Finite(Complex<R>),
    Infinity,
}

impl<R: Real> Point<R> {
    pub fn finite(&self) -> Option<&Complex<R>> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl<R: Real> From<Complex<R>> for Point<R> {
    fn from(z: Complex<R>) -> Self {
        Point::Finite(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_inverts_multiplication() {
        let c = PrecisionContext::DOUBLE;
        let a = Complex::<f64>::from_f64(1.5, -2.0, c);
        let b = Complex::<f64>::from_f64(-0.25, 0.75, c);
        let q = (a.clone() * b.clone()) / b;
        assert!((q - a).abs() < 1e-15);
    }

    #[test]
    fn powi_negative() {
        let c = PrecisionContext::DOUBLE;
        let z = Complex::<f64>::from_f64(0.0, 2.0, c);
        let w = z.powi(-3);
        // (2i)^-3 = 1/(-8i) = i/8
        assert!((w.re).abs() < 1e-16 && (w.im - 0.125).abs() < 1e-16);
    }

    #[test]
    fn abs_no_overflow() {
        let c = PrecisionContext::DOUBLE;
        let z = Complex::<f64>::from_f64(3e200, 4e200, c);
        assert!((z.abs() / 5e200 - 1.0).abs() < 1e-15);
    }
}
