use serde::{Deserialize, Serialize};

use crate::families::{Coefficients, MapKind, MapSpec};
use crate::numerics::{mp, Complex, Mp, Point, PrecisionContext, Real};

/// Which Fatou basin an orbit was captured by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasinTag {
    /// Basin whose boundary contains 1 (for f, the basin of ∞).
    ParabolicOuter,
    /// Basin of s^ν for Q, of the partner z_0 for R.
    ParabolicInner,
    AttractingOrigin,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Region<R> {
    Disk { center: Complex<R>, radius: R },
    DiskComplement { center: Complex<R>, radius: R },
    Annulus { center: Complex<R>, r_inner: R, r_outer: R },
}

impl<R: Real> Region<R> {
    pub fn disk(center: Complex<R>, radius: R) -> Self {
        assert!(radius > R::from_f64(0.0, center.ctx()), "radius must be positive");
        Region::Disk { center, radius }
    }

    pub fn disk_complement(center: Complex<R>, radius: R) -> Self {
        assert!(radius > R::from_f64(0.0, center.ctx()), "radius must be positive");
        Region::DiskComplement { center, radius }
    }

    pub fn annulus(center: Complex<R>, r_inner: R, r_outer: R) -> Self {
        assert!(
            r_inner > R::from_f64(0.0, center.ctx()) && r_inner < r_outer,
            "annulus radii must satisfy 0 < r_inner < r_outer"
        );
        Region::Annulus { center, r_inner, r_outer }
    }

    pub fn center(&self) -> &Complex<R> {
        match self {
            Region::Disk { center, .. }
            | Region::DiskComplement { center, .. }
            | Region::Annulus { center, .. } => center,
        }
    }

    /// Strict containment; ∞ belongs only to disk complements.
    pub fn contains(&self, z: &Point<R>) -> bool {
        let Point::Finite(z) = z else {
            return matches!(self, Region::DiskComplement { .. });
        };
        let r2 = (z.clone() - self.center().clone()).norm_sqr();
        match self {
            Region::Disk { radius, .. } => r2 < radius.clone() * radius.clone(),
            Region::DiskComplement { radius, .. } => r2 > radius.clone() * radius.clone(),
            Region::Annulus { r_inner, r_outer, .. } => {
                r2 > r_inner.clone() * r_inner.clone() && r2 < r_outer.clone() * r_outer.clone()
            }
        }
    }

    /// How deep a point sits: below 1 inside, above 1 outside, 1 on the boundary.
    pub fn margin(&self, z: &Point<R>) -> R {
        let c = self.center().ctx();
        let Point::Finite(z) = z else {
            let v = if matches!(self, Region::DiskComplement { .. }) { 0.0 } else { f64::INFINITY };
            return R::from_f64(v, c);
        };
        let r = (z.clone() - self.center().clone()).abs();
        match self {
            Region::Disk { radius, .. } => r / radius.clone(),
            Region::DiskComplement { radius, .. } => radius.clone() / r,
            Region::Annulus { r_inner, r_outer, .. } => {
                (r_inner.clone() / r.clone()).max_of(r / r_outer.clone())
            }
        }
    }

    pub fn diameter(&self) -> R {
        match self {
            Region::Disk { radius, .. } | Region::DiskComplement { radius, .. } => radius.cst(2.0) * radius.clone(),
            Region::Annulus { r_outer, .. } => r_outer.cst(2.0) * r_outer.clone(),
        }
    }

    /// `count` points on each boundary circle at angles 2π(k + ½)/count.
    pub fn boundary_samples(&self, count: usize) -> Vec<Complex<R>> {
        let c = self.center().ctx();
        let circles: Vec<R> = match self {
            Region::Disk { radius, .. } | Region::DiskComplement { radius, .. } => vec![radius.clone()],
            Region::Annulus { r_inner, r_outer, .. } => vec![r_inner.clone(), r_outer.clone()],
        };
        let two_pi = R::pi(c).cst(2.0) * R::pi(c);
        let mut out = Vec::with_capacity(count * circles.len());
        for r in circles {
            for k in 0..count {
                let t = two_pi.clone() * R::from_f64(k as f64 + 0.5, c) / R::from_f64(count as f64, c);
                out.push(self.center().clone() + Complex::from_polar(&r, &t));
            }
        }
        out
    }

    pub fn convert<S: Real>(&self, ctx: PrecisionContext) -> Region<S> {
        let r = |x: &R| S::from_mp(&x.to_mp(ctx), ctx);
        match self {
            Region::Disk { center, radius } => Region::Disk { center: center.convert(ctx), radius: r(radius) },
            Region::DiskComplement { center, radius } => {
                Region::DiskComplement { center: center.convert(ctx), radius: r(radius) }
            }
            Region::Annulus { center, r_inner, r_outer } => Region::Annulus {
                center: center.convert(ctx),
                r_inner: r(r_inner),
                r_outer: r(r_outer),
            },
        }
    }

    pub fn describe(&self) -> String {
        let c = |z: &Complex<R>| format!("{}", z.to_f64());
        match self {
            Region::Disk { center, radius } => format!("D({}, {:e})", c(center), radius.to_f64()),
            Region::DiskComplement { center, radius } => {
                format!("complement of closed D({}, {:e})", c(center), radius.to_f64())
            }
            Region::Annulus { center, r_inner, r_outer } => {
                format!("A({}; {:e}, {:e})", c(center), r_inner.to_f64(), r_outer.to_f64())
            }
        }
    }
}

/// A region that the `iterate`-th iterate of the map sends into itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Trap {
    pub name: String,
    pub region: Region<Mp>,
    pub tag: BasinTag,
    pub iterate: usize,
    /// Parabolic point on the boundary, where strict containment is replaced by
    /// the petal condition.
    pub parabolic: Option<Complex<Mp>>,
}

impl Trap {
    /// A user-supplied region for the first iterate.
    pub fn user(region: Region<Mp>, tag: BasinTag) -> Self {
        Trap { name: "user".into(), region, tag, iterate: 1, parabolic: None }
    }
}

fn outer_trap(ctx: PrecisionContext, iterate: usize) -> Trap {
    Trap {
        name: "U_inf".into(),
        region: Region::disk_complement(Complex::from_f64(-1.0, 0.0, ctx), mp(2.0, ctx)),
        tag: BasinTag::ParabolicOuter,
        iterate,
        parabolic: Some(Complex::one(ctx)),
    }
}

/// The canonical traps of a map, in the order they are tested.
pub fn canonical_traps(spec: &MapSpec) -> Vec<Trap> {
    let c = spec.precision;
    let zero = Complex::<Mp>::zero(c);
    match spec.kind {
        MapKind::ParabolicP => {
            let mut v = vec![outer_trap(c, 1)];
            let d = spec.degrees.as_ref().unwrap();
            if d.is_odd() {
                let dm = mp(d.dmax() as f64, c);
                let r = <Mp as Real>::powi(&dm, 4) * spec.s().unwrap().clone();
                v.push(Trap {
                    name: "U_0".into(),
                    region: Region::disk(zero, r),
                    tag: BasinTag::AttractingOrigin,
                    iterate: 1,
                    parabolic: None,
                });
            }
            v
        }
        MapKind::ParabolicQ => {
            let sv = spec.s_nu().unwrap();
            vec![outer_trap(c, 1), inner_trap(sv, 1)]
        }
        MapKind::ParabolicR => {
            let Coefficients::R { z0, .. } = &spec.coeffs else { unreachable!() };
            vec![outer_trap(c, 2), inner_trap(z0.clone(), 2)]
        }
        MapKind::HyperbolicF { .. } => {
            let map = crate::families::Map::<f64>::new(spec, c);
            let (e0, ce) = (map.origin_exponent(), map.chart_exponent());
            // 0 and ∞ are either both fixed, swapped, or one of them is absorbed by the other.
            let iterate = if e0 < 0 && ce > 0 { 2 } else { 1 };
            let d = spec.degrees.as_ref().unwrap();
            let r0 = <Mp as Real>::powi(&mp(d.dmax() as f64, c), 4) * spec.s().unwrap().clone();
            let mut v = Vec::new();
            if ce < 0 || iterate == 2 {
                v.push(Trap {
                    name: "U_inf".into(),
                    region: Region::disk_complement(zero.clone(), mp(2.0, c)),
                    tag: BasinTag::ParabolicOuter,
                    iterate,
                    parabolic: None,
                });
            }
            if e0 > 0 || iterate == 2 {
                v.push(Trap {
                    name: "U_0".into(),
                    region: Region::disk(zero, r0),
                    tag: BasinTag::AttractingOrigin,
                    iterate,
                    parabolic: None,
                });
            }
            v
        }
        MapKind::RefRatH { .. } | MapKind::RefRatHmn { .. } => {
            vec![outer_trap(c, 1)]
        }
        MapKind::RefPolyG { .. } | MapKind::RefPolyGmn { .. } => vec![half_disk_trap(c)],
    }
}

/// D(p/4, 3p/4), whose boundary passes through the parabolic point p.
fn inner_trap(p: Mp, iterate: usize) -> Trap {
    let c = p.ctx();
    Trap {
        name: "U_0".into(),
        region: Region::disk(Complex::real(p.clone() / mp(4.0, c)), p.clone() * mp(0.75, c)),
        tag: BasinTag::ParabolicInner,
        iterate,
        parabolic: Some(Complex::real(p)),
    }
}

/// D_{1/2} = D(1/2, 1/2); the petal of the parabolic polynomials at 1 opens to the left.
fn half_disk_trap(c: PrecisionContext) -> Trap {
    Trap {
        name: "D_1/2".into(),
        region: Region::disk(Complex::from_f64(0.5, 0.0, c), mp(0.5, c)),
        tag: BasinTag::ParabolicOuter,
        iterate: 1,
        parabolic: Some(Complex::one(c)),
    }
}
