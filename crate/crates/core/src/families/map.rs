use super::spec::{Coefficients, MapKind, MapSpec};
use crate::numerics::{Complex, ComplexScalar, Dual, Mp, Point, PrecisionContext, Real};

/// Beyond this modulus evaluation switches to the chart w = 1/z.
pub const CHART_RADIUS: f64 = 1e8;

/// Image of a point together with the derivative, or a pole.
#[derive(Clone, Debug, PartialEq)]
pub enum MapValue<R> {
    Finite(Dual<R>),
    Infinity { order: u32 },
}

impl<R: Real> MapValue<R> {
    pub fn point(&self) -> Point<R> {
        match self {
            MapValue::Finite(d) => Point::Finite(d.value.clone()),
            MapValue::Infinity { .. } => Point::Infinity,
        }
    }

    pub fn finite(&self) -> Option<&Dual<R>> {
        match self {
            MapValue::Finite(d) => Some(d),
            MapValue::Infinity { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Factor<R> {
    power: i32,
    root: Complex<R>,
    sign: i32,
}

/// Every family in the crate has the shape
///   K · z^{e0} · Π (z^{D} − c)^{±1} / (α z^{d_1} + β z + γ) + add.
/// The denominator is absent for R, f and the reference maps.
#[derive(Clone, Debug)]
pub struct Map<R> {
    pub kind: MapKind,
    k: Complex<R>,
    e0: i32,
    den: Option<(i32, Complex<R>, Complex<R>, Complex<R>)>,
    factors: Vec<Factor<R>>,
    add: Complex<R>,
    chart_exp: i32,
    ctx: PrecisionContext,
}

fn sign(k: i64) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

struct Shape {
    k: Complex<Mp>,
    e0: i32,
    den: Option<(i32, Complex<Mp>, Complex<Mp>, Complex<Mp>)>,
    factors: Vec<(i32, Complex<Mp>, i32)>,
    add: Complex<Mp>,
}

fn shape(spec: &MapSpec) -> Shape {
    let c = spec.precision;
    let re = |x: &Mp| Complex::real(x.clone());
    let int = |k: i64| Complex::<Mp>::real(<Mp as Real>::from_i64(k, c));
    let zero = Complex::<Mp>::zero(c);
    let ring_factors = |signs: &dyn Fn(usize) -> i32| -> Vec<(i32, Complex<Mp>, i32)> {
        let d = spec.degrees.as_ref().unwrap();
        let rings = spec.rings.as_ref().unwrap();
        (1..d.n())
            .map(|i| {
                let big_d = d.big_d(i) as i32;
                (big_d, rings.value(i).powi(big_d), signs(i))
            })
            .collect()
    };
    match spec.kind {
        MapKind::ParabolicP => {
            let d = spec.degrees.as_ref().unwrap();
            let Coefficients::P { a, b, .. } = &spec.coeffs else { unreachable!() };
            let (d1, dn, n) = (d.first() as i64, d.last() as i64, d.n() as i64);
            Shape {
                k: a.clone() * int(d1),
                e0: sign(n - 1) * dn as i32,
                den: Some((d1 as i32, int(d1 - 1), zero.clone(), int(1))),
                factors: ring_factors(&|i| sign(i as i64 - 1)),
                add: b.clone(),
            }
        }
        MapKind::ParabolicQ => {
            let d = spec.degrees.as_ref().unwrap();
            let Coefficients::Q { x, y, z, w, .. } = &spec.coeffs else { unreachable!() };
            let d1 = d.first() as i64;
            Shape {
                k: int(d1),
                e0: d.last() as i32,
                den: Some((d1 as i32, re(x) * int(d1 - 1), re(y), re(z))),
                factors: ring_factors(&|i| sign(i as i64 - 1)),
                add: re(w),
            }
        }
        MapKind::ParabolicR => {
            let d = spec.degrees.as_ref().unwrap();
            let Coefficients::R { s, t, .. } = &spec.coeffs else { unreachable!() };
            Shape {
                k: re(s),
                e0: -(d.last() as i32),
                den: None,
                factors: ring_factors(&|i| sign(i as i64)),
                add: re(t),
            }
        }
        MapKind::HyperbolicF { p } => {
            let d = spec.degrees.as_ref().unwrap();
            let n = d.n() as i64;
            let p = p as i64;
            Shape {
                k: int(1),
                e0: sign(n - p) * d.first() as i32,
                den: None,
                factors: ring_factors(&|i| sign(n - i as i64 - p)),
                add: zero,
            }
        }
        MapKind::RefPolyG { n } => {
            let n = n as i64;
            Shape {
                k: Complex::real(<Mp as Real>::ratio(1, n, c)),
                e0: 0,
                den: None,
                factors: vec![(n as i32, int(1 - n), 1)],
                add: zero,
            }
        }
        MapKind::RefPolyGmn { m, n } => {
            let (m, n) = (m as i64, n as i64);
            let k = <Mp as Real>::powi(&<Mp as Real>::from_i64(m * n, c), -(n as i32));
            Shape {
                k: Complex::real(k),
                e0: 0,
                den: None,
                factors: vec![(m as i32, int(1 - m * n), 1); n as usize],
                add: zero,
            }
        }
        MapKind::RefRatH { n } => {
            let n = n as i64;
            Shape {
                k: Complex::real(<Mp as Real>::ratio(n, n - 1, c)),
                e0: n as i32,
                den: None,
                factors: vec![(n as i32, Complex::real(<Mp as Real>::ratio(-1, n - 1, c)), -1)],
                add: zero,
            }
        }
        MapKind::RefRatHmn { m, n } => {
            let (m, n) = (m as i64, n as i64);
            let k = <Mp as Real>::powi(&<Mp as Real>::ratio(m * n, m * n - 1, c), n as i32);
            Shape {
                k: Complex::real(k),
                e0: (m * n) as i32,
                den: None,
                factors: vec![(m as i32, Complex::real(<Mp as Real>::ratio(-1, m * n - 1, c)), -1); n as usize],
                add: zero,
            }
        }
    }
}

/// Degree of the map read off the exponent bookkeeping of the factored form.
pub(crate) fn exponent_degree(spec: &MapSpec) -> u32 {
    let sh = shape(spec);
    let mut num = sh.e0.max(0);
    let mut den = (-sh.e0).max(0);
    for (p, _, s) in &sh.factors {
        if *s > 0 {
            num += p;
        } else {
            den += p;
        }
    }
    if let Some((d1, ..)) = sh.den {
        den += d1;
    }
    num.max(den) as u32
}

impl<R: Real> Map<R> {
    /// Compiles a spec for evaluation at precision `ctx`.
    pub fn new(spec: &MapSpec, ctx: PrecisionContext) -> Self {
        let sh = shape(spec);
        let cv = |z: &Complex<Mp>| z.convert::<R>(ctx);
        let mut chart_exp = -sh.e0;
        for (p, _, s) in &sh.factors {
            chart_exp -= s * p;
        }
        if let Some((d1, ..)) = &sh.den {
            chart_exp += d1;
        }
        Map {
            kind: spec.kind,
            k: cv(&sh.k),
            e0: sh.e0,
            den: sh.den.as_ref().map(|(d1, a, b, g)| (*d1, cv(a), cv(b), cv(g))),
            factors: sh
                .factors
                .iter()
                .map(|(p, r, s)| Factor { power: *p, root: cv(r), sign: *s })
                .collect(),
            add: cv(&sh.add),
            chart_exp,
            ctx,
        }
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    fn in_chart(&self, z: &Complex<R>) -> bool {
        z.norm_sqr() > R::from_f64(CHART_RADIUS * CHART_RADIUS, self.ctx)
    }

    /// Direct evaluation at a finite point; None at a pole.
    fn direct<T: ComplexScalar<R>>(&self, z: &T) -> Option<T> {
        if z.value().is_zero() && self.e0 < 0 {
            return None;
        }
        let mut v = T::lift(self.k.clone()) * z.powi(self.e0);
        for f in &self.factors {
            let t = z.powi(f.power) - T::lift(f.root.clone());
            if f.sign > 0 {
                v = v * t;
            } else {
                if t.value().is_zero() {
                    return None;
                }
                v = v / t;
            }
        }
        if let Some((d1, a, b, g)) = &self.den {
            let den = T::lift(a.clone()) * z.powi(*d1) + T::lift(b.clone()) * z.clone() + T::lift(g.clone());
            if den.value().is_zero() {
                return None;
            }
            v = v / den;
        }
        Some(v + T::lift(self.add.clone()))
    }

    /// Evaluation in the chart w = 1/z; None at a pole.
    fn chart<T: ComplexScalar<R>>(&self, w: &T) -> Option<T> {
        if w.value().is_zero() && self.chart_exp < 0 {
            return None;
        }
        let one = T::lift(Complex::one(self.ctx));
        let mut v = T::lift(self.k.clone()) * w.powi(self.chart_exp);
        for f in &self.factors {
            let t = one.clone() - T::lift(f.root.clone()) * w.powi(f.power);
            if f.sign > 0 {
                v = v * t;
            } else {
                if t.value().is_zero() {
                    return None;
                }
                v = v / t;
            }
        }
        if let Some((d1, a, b, g)) = &self.den {
            let den = T::lift(a.clone()) + T::lift(b.clone()) * w.powi(d1 - 1) + T::lift(g.clone()) * w.powi(*d1);
            if den.value().is_zero() {
                return None;
            }
            v = v / den;
        }
        Some(v + T::lift(self.add.clone()))
    }

    fn pole_order_at(&self, z: &Point<R>) -> u32 {
        match z {
            Point::Infinity => (-self.chart_exp).max(1) as u32,
            Point::Finite(z) if z.is_zero() && self.e0 < 0 => (-self.e0) as u32,
            _ => 1,
        }
    }

    /// Value only, the fast path used by iteration.
    pub fn eval(&self, z: &Point<R>) -> Point<R> {
        let v = match z {
            Point::Infinity => self.chart(&Complex::zero(self.ctx)),
            Point::Finite(z) if self.in_chart(z) => self.chart(&z.recip()),
            Point::Finite(z) => self.direct(z),
        };
        match v {
            Some(v) if v.is_finite() => Point::Finite(v),
            _ => Point::Infinity,
        }
    }

    /// Value and derivative with respect to z.
    pub fn eval_dual(&self, z: &Point<R>) -> MapValue<R> {
        let v = match z {
            Point::Infinity => self.chart(&Dual::constant(Complex::zero(self.ctx))),
            Point::Finite(z) if self.in_chart(z) => {
                let w = z.recip();
                // dw/dz = −w²
                let dw = -(w.clone() * w.clone());
                self.chart(&Dual::new(w, dw))
            }
            Point::Finite(z) => self.direct(&Dual::variable(z.clone())),
        };
        match v {
            Some(v) if v.value.is_finite() => MapValue::Finite(v),
            _ => MapValue::Infinity { order: self.pole_order_at(z) },
        }
    }

    /// Value and derivative at a finite point, ignoring the chart switch; used by
    /// Newton solves that must stay in one chart.
    pub fn eval_dual_direct(&self, z: &Complex<R>) -> Option<Dual<R>> {
        self.direct(&Dual::variable(z.clone()))
    }

    pub fn iterate(&self, z: &Point<R>, k: usize) -> Point<R> {
        let mut p = z.clone();
        for _ in 0..k {
            p = self.eval(&p);
        }
        p
    }

    /// k-th iterate with its derivative, None once the orbit hits a pole or leaves
    /// the direct chart.
    pub fn iterate_dual(&self, z: &Complex<R>, k: usize) -> Option<Dual<R>> {
        let mut v = Dual::variable(z.clone());
        for _ in 0..k {
            let step = match self.eval_dual(&Point::Finite(v.value.clone())) {
                MapValue::Finite(d) => d,
                MapValue::Infinity { .. } => return None,
            };
            v = Dual::new(step.value, step.derivative * v.derivative);
        }
        Some(v)
    }

    /// z·G′/G for G = f − add. Away from 0, ∞ and the zeros and poles of G its
    /// zeros are exactly the critical points of f.
    pub fn critical_equation<T: ComplexScalar<R>>(&self, z: &T) -> T {
        let lift = |x: &Complex<R>| T::lift(x.clone());
        let int = |k: i32| T::lift(Complex::real(R::from_i64(k as i64, self.ctx)));
        let mut v = int(self.e0);
        for f in &self.factors {
            let zd = z.powi(f.power);
            let t = int(f.sign * f.power) * zd.clone() / (zd - lift(&f.root));
            v = v + t;
        }
        if let Some((d1, a, b, g)) = &self.den {
            let zd = z.powi(*d1);
            let den = lift(a) * zd.clone() + lift(b) * z.clone() + lift(g);
            let dz = int(*d1) * lift(a) * zd + lift(b) * z.clone();
            v = v - dz / den;
        }
        v
    }

    /// Local degree of f at 0, read off the lowest-order term of the factored form.
    pub fn local_degree_zero(&self) -> u32 {
        if self.e0 != 0 {
            return self.e0.unsigned_abs();
        }
        let mut m = self.factors.iter().map(|f| f.power).min().unwrap_or(i32::MAX);
        if let Some((d1, _, b, _)) = &self.den {
            m = m.min(if b.is_zero() { *d1 } else { 1 });
        }
        m as u32
    }

    /// Local degree of f at ∞, from the chart w = 1/z.
    pub fn local_degree_infinity(&self) -> u32 {
        if self.chart_exp != 0 {
            return self.chart_exp.unsigned_abs();
        }
        let mut m = self.factors.iter().map(|f| f.power).min().unwrap_or(i32::MAX);
        if let Some((d1, _, b, g)) = &self.den {
            if !b.is_zero() {
                m = m.min(d1 - 1);
            } else if !g.is_zero() {
                m = m.min(*d1);
            }
        }
        m as u32
    }

    /// Factors (D, c) that occur k > 1 times, as (D, c, k). Each root of z^D = c is
    /// then a critical point of multiplicity k − 1.
    pub fn repeated_factors(&self) -> Vec<(i32, Complex<R>, u32)> {
        let mut out: Vec<(i32, Complex<R>, u32)> = Vec::new();
        for f in &self.factors {
            match out.iter_mut().find(|(p, c, _)| *p == f.power && *c == f.root) {
                Some(e) => e.2 += 1,
                None => out.push((f.power, f.root.clone(), 1)),
            }
        }
        out.retain(|e| e.2 > 1);
        out
    }

    /// (D_i, ±1) for each factor (z^{D_i} − c_i)^{±1}, in ring order.
    pub fn factor_exponents(&self) -> Vec<(i32, i32)> {
        self.factors.iter().map(|f| (f.power, f.sign)).collect()
    }

    pub fn origin_exponent(&self) -> i32 {
        self.e0
    }

    /// Exponent of w in the chart at ∞: positive means f(∞) = 0 to that order
    /// (up to the additive constant), negative means a pole.
    pub fn chart_exponent(&self) -> i32 {
        self.chart_exp
    }
}

/// f(z) and f′(z) at the spec's own precision.
pub fn evaluate(spec: &MapSpec, z: &Point<Mp>) -> MapValue<Mp> {
    Map::<Mp>::new(spec, spec.precision).eval_dual(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{explicit_rings, validate_degrees, Family, RingParameters};
    use crate::numerics::mp;

    fn p_spec(degs: &[i64], a: &[f64]) -> MapSpec {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(degs).unwrap();
        let r = explicit_rings(Family::P, &d, a.iter().map(|&x| mp(x, c)).collect(), None).unwrap();
        MapSpec::parabolic_p(d, r).unwrap()
    }

    fn zero_p(degs: &[i64]) -> MapSpec {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(degs).unwrap();
        let n = d.n() - 1;
        let r = RingParameters { moduli: vec![mp(0.0, c); n], phases: vec![mp(0.0, c); n], s: mp(0.0, c) };
        MapSpec::parabolic_p(d, r).unwrap()
    }

    fn at(x: f64, y: f64) -> Point<Mp> {
        Point::Finite(Complex::from_f64(x, y, PrecisionContext::SOLVER_DEFAULT))
    }

    #[test]
    fn p33_parabolic_at_one() {
        let spec = p_spec(&[3, 3], &[0.25]);
        let MapValue::Finite(v) = evaluate(&spec, &at(1.0, 0.0)) else { panic!() };
        let c = spec.precision;
        let tol = mp(1e-45, c);
        assert!((v.value - Complex::one(c)).abs() < tol);
        assert!((v.derivative - Complex::one(c)).abs() < tol);
    }

    #[test]
    fn collapsed_p_is_h3() {
        let spec = zero_p(&[3, 3]);
        let MapValue::Finite(v) = evaluate(&spec, &at(2.0, 0.0)) else { panic!() };
        let c = spec.precision;
        assert!((v.value.re - mp(24.0, c) / mp(17.0, c)).abs() < mp(1e-48, c));
    }

    #[test]
    fn origin_behaviour() {
        let p444 = p_spec(&[4, 4, 4], &[0.1, 0.01]);
        let MapValue::Finite(v) = evaluate(&p444, &at(0.0, 0.0)) else { panic!() };
        let Coefficients::P { b, .. } = &p444.coeffs else { panic!() };
        assert_eq!(&v.value, b);

        let p33 = p_spec(&[3, 3], &[0.25]);
        assert_eq!(evaluate(&p33, &at(0.0, 0.0)), MapValue::Infinity { order: 3 });
    }

    #[test]
    fn degrees_add_up() {
        assert_eq!(p_spec(&[3, 3], &[0.25]).degree(), 6);
        assert_eq!(p_spec(&[4, 4, 4], &[0.1, 0.01]).degree(), 12);
        assert_eq!(p_spec(&[2, 3, 7], &[0.5, 0.1]).degree(), 12);
        let c = PrecisionContext::DOUBLE;
        assert_eq!(MapSpec::reference(MapKind::RefRatHmn { m: 4, n: 4 }, c).unwrap().degree(), 16);
        assert_eq!(MapSpec::reference(MapKind::RefPolyGmn { m: 3, n: 2 }, c).unwrap().degree(), 6);
    }

    #[test]
    fn chart_agrees_with_direct() {
        let spec = p_spec(&[4, 4, 4], &[0.1, 0.01]);
        let m = Map::<Mp>::new(&spec, spec.precision);
        let c = spec.precision;
        let z = Complex::from_f64(3.0, -2.0, c);
        let direct = m.direct(&Dual::variable(z.clone())).unwrap();
        let w = z.recip();
        let dw = -(w.clone() * w.clone());
        let chart = m.chart(&Dual::new(w, dw)).unwrap();
        assert!((direct.value - chart.value).abs() < mp(1e-45, c));
        assert!((direct.derivative - chart.derivative).abs() < mp(1e-45, c));
    }

    #[test]
    fn infinity_values() {
        let c = PrecisionContext::DOUBLE;
        let h = MapSpec::reference(MapKind::RefRatH { n: 4 }, c).unwrap();
        let m = Map::<f64>::new(&h, c);
        let Point::Finite(v) = m.eval(&Point::Infinity) else { panic!() };
        assert!((v.re - 4.0 / 3.0).abs() < 1e-15);
        let g = MapSpec::reference(MapKind::RefPolyG { n: 4 }, c).unwrap();
        let m = Map::<f64>::new(&g, c);
        assert_eq!(m.eval(&Point::Infinity), Point::Infinity);
        assert_eq!(m.eval_dual(&Point::Infinity), MapValue::Infinity { order: 4 });
    }

    #[test]
    fn reference_formulas() {
        let c = PrecisionContext::DOUBLE;
        let z = Complex::<f64>::from_f64(0.3, 0.7, c);
        let one = Complex::one(c);
        let cases: Vec<(MapKind, Complex<f64>)> = vec![
            (MapKind::RefPolyG { n: 4 }, (z.powi(4) + Complex::real(3.0)).scale(&0.25)),
            (
                MapKind::RefPolyGmn { m: 2, n: 3 },
                (z.powi(2) + Complex::real(5.0)).powi(3).scale(&(1.0 / 216.0)),
            ),
            (
                MapKind::RefRatH { n: 3 },
                z.powi(3).scale(&3.0) / (one.clone() + z.powi(3).scale(&2.0)),
            ),
            (
                MapKind::RefRatHmn { m: 2, n: 2 },
                z.powi(4).scale(&16.0) / (one.clone() + z.powi(2).scale(&3.0)).powi(2),
            ),
        ];
        for (kind, expect) in cases {
            let m = Map::<f64>::new(&MapSpec::reference(kind, c).unwrap(), c);
            let Point::Finite(v) = m.eval(&Point::Finite(z.clone())) else { panic!() };
            assert!((v - expect).abs() < 1e-14, "{kind:?}");
        }
    }
}
