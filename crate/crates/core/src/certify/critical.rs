use serde_json::{json, Value};

use super::CertifyError;
use crate::families::{Map, MapSpec};
use crate::numerics::{mp, newton_root, Complex, Dual, Mp, Point, Real};
use crate::solver::tolerance;

#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePoint {
    pub ring: usize,
    pub index: usize,
    pub point: Complex<Mp>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalMarker {
    Ring { ring: usize, index: usize },
    Origin,
    Infinity,
    /// Root of a repeated factor (z^D − c)^k.
    Factor,
    /// Found by deflated search, not predicted by the ring structure.
    Free,
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub marker: CriticalMarker,
    pub location: Point<Mp>,
    pub multiplicity: u32,
    /// Distance to the reference point and the allowed radius s^{1/2}|a_i|, for ring points.
    pub distance: Option<Mp>,
    pub bound: Option<Mp>,
}

impl CriticalPoint {
    pub fn within_ball(&self) -> bool {
        match (&self.distance, &self.bound) {
            (Some(d), Some(b)) => d < b,
            _ => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalReport {
    pub points: Vec<CriticalPoint>,
    pub total_multiplicity: u32,
    pub expected: u32,
    /// Refined ring points pairwise separated by more than |a_i| sin(π/D_i).
    pub distinct: bool,
    pub pass: bool,
}

impl CriticalReport {
    pub fn ring_points(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| matches!(p.marker, CriticalMarker::Ring { .. }))
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let loc = match &p.location {
                    Point::Finite(z) => json!([z.re.to_f64(), z.im.to_f64()]),
                    Point::Infinity => json!("infinity"),
                };
                json!({
                    "marker": format!("{:?}", p.marker),
                    "location": loc,
                    "multiplicity": p.multiplicity,
                    "distance": p.distance.as_ref().map(|d| d.to_f64()),
                    "bound": p.bound.as_ref().map(|b| b.to_f64()),
                    "within_ball": p.within_ball(),
                })
            })
            .collect();
        json!({
            "pass": self.pass,
            "total_multiplicity": self.total_multiplicity,
            "expected": self.expected,
            "distinct": self.distinct,
            "points": pts,
        })
    }
}

/// Seeds w̃_{i,j} for the critical points near ring i: the D_i roots of the ring
/// balance equation, in which the factors inside ring i contribute their full
/// exponent to z·f′/f and those outside contribute nothing. For P this is
/// w̃_{i,j} = r_i a_i e^{πi(2j−1)/D_i} with r_i = (d_{i+1}/d_i)^{1/D_i}.
pub fn reference_critical_points(spec: &MapSpec) -> Result<Vec<ReferencePoint>, CertifyError> {
    let (Some(d), Some(rings)) = (&spec.degrees, &spec.rings) else {
        return Err(CertifyError::Unsupported("map has no ring parameters".into()));
    };
    let ctx = spec.precision;
    let map = Map::<f64>::new(spec, ctx);
    let exps = map.factor_exponents();
    let pi = <Mp as Real>::pi(ctx);
    let mut out = Vec::new();
    for i in 1..d.n() {
        let (big_d, sign) = exps[i - 1];
        // Exponent of z·f′/f just inside ring i.
        let inner: i64 = map.origin_exponent() as i64
            + exps[i..].iter().map(|(p, s)| (p * s) as i64).sum::<i64>();
        let own = (sign * big_d) as i64;
        // u/(u − c) = −inner/own, so u = c·inner/(inner + own).
        if inner == 0 || inner + own == 0 {
            continue;
        }
        let rho = <Mp as Real>::ratio(inner, inner + own, ctx);
        let r = <Mp as Real>::powf(&<Mp as Real>::abs(&rho), &<Mp as Real>::ratio(1, big_d as i64, ctx));
        let shift = if rho < 0 { 1 } else { 2 };
        let a = rings.value(i);
        for j in 1..=big_d as i64 {
            let t = pi.clone() * <Mp as Real>::ratio(2 * j - shift, big_d as i64, ctx);
            let w = a.clone() * Complex::from_polar(&r, &t);
            out.push(ReferencePoint { ring: i, index: j as usize, point: w });
        }
    }
    Ok(out)
}

const NEWTON_STEPS: usize = 80;

/// Locates all 2·deg − 2 critical points: ring points refined from their
/// reference seeds, 0 and ∞ with their local multiplicities, roots of repeated
/// factors, and any remainder by deflated Newton search.
pub fn certify_critical_points(spec: &MapSpec) -> Result<CriticalReport, CertifyError> {
    let ctx = spec.precision;
    let map = Map::<Mp>::new(spec, ctx);
    let tol = tolerance(ctx);
    let g = |z: &Complex<Mp>| map.critical_equation(&Dual::variable(z.clone()));
    let mut points = Vec::new();

    let refs = if spec.rings.is_some() { reference_critical_points(spec)? } else { Vec::new() };
    let sqrt_s = spec.s().map(<Mp as Real>::sqrt);
    for r in &refs {
        let a = spec.rings.as_ref().unwrap().value(r.ring).abs();
        let bound = sqrt_s.clone().unwrap() * a;
        let (location, distance) = match newton_root(g, r.point.clone(), &tol, NEWTON_STEPS) {
            Ok(rep) => {
                let dist = (rep.root.clone() - r.point.clone()).abs();
                (Point::Finite(rep.root), dist)
            }
            Err(_) => (Point::Finite(r.point.clone()), mp(f64::INFINITY, ctx)),
        };
        points.push(CriticalPoint {
            marker: CriticalMarker::Ring { ring: r.ring, index: r.index },
            location,
            multiplicity: 1,
            distance: Some(distance),
            bound: Some(bound),
        });
    }

    let m0 = map.local_degree_zero() - 1;
    if m0 > 0 {
        points.push(CriticalPoint {
            marker: CriticalMarker::Origin,
            location: Point::Finite(Complex::zero(ctx)),
            multiplicity: m0,
            distance: None,
            bound: None,
        });
    }
    let minf = map.local_degree_infinity() - 1;
    if minf > 0 {
        points.push(CriticalPoint {
            marker: CriticalMarker::Infinity,
            location: Point::Infinity,
            multiplicity: minf,
            distance: None,
            bound: None,
        });
    }
    let pi = <Mp as Real>::pi(ctx);
    for (power, c, k) in map.repeated_factors() {
        let rho = <Mp as Real>::powf(&c.abs(), &<Mp as Real>::ratio(1, power as i64, ctx));
        let arg = c.arg();
        for j in 0..power {
            let t = (arg.clone() + pi.clone() * mp(2.0 * j as f64, ctx)) / mp(power as f64, ctx);
            points.push(CriticalPoint {
                marker: CriticalMarker::Factor,
                location: Point::Finite(Complex::from_polar(&rho, &t)),
                multiplicity: k - 1,
                distance: None,
                bound: None,
            });
        }
    }

    let expected = 2 * spec.degree() - 2;
    let mut total: u32 = points.iter().map(|p| p.multiplicity).sum();
    if total < expected {
        for z in deflated_search(&map, &points, expected - total, &tol) {
            points.push(CriticalPoint {
                marker: CriticalMarker::Free,
                location: Point::Finite(z),
                multiplicity: 1,
                distance: None,
                bound: None,
            });
        }
        total = points.iter().map(|p| p.multiplicity).sum();
    }

    let distinct = ring_points_distinct(spec, &points);
    let pass = total == expected && distinct && points.iter().all(|p| p.within_ball());
    Ok(CriticalReport { points, total_multiplicity: total, expected, distinct, pass })
}

/// Newton on the critical equation divided by Π(z − known) from seeds on
/// log-spaced circles, largest first, keeping up to `want` new simple roots.
fn deflated_search(map: &Map<Mp>, known: &[CriticalPoint], want: u32, tol: &Mp) -> Vec<Complex<Mp>> {
    let ctx = map.ctx();
    let mut roots: Vec<Complex<Mp>> =
        known.iter().filter_map(|p| p.location.finite().cloned()).collect();
    let mut found = Vec::new();
    'seeds: for k in (-24..=24).rev() {
        for a in 0..8 {
            if found.len() as u32 >= want {
                break 'seeds;
            }
            let r = <Mp as Real>::powf(&mp(10.0, ctx), &mp(k as f64 / 2.0, ctx));
            let t = mp(0.3 + a as f64 * std::f64::consts::FRAC_PI_4, ctx);
            let seed = Complex::from_polar(&r, &t);
            let f = |z: &Complex<Mp>| {
                let zd = Dual::variable(z.clone());
                let mut v = map.critical_equation(&zd);
                for w in &roots {
                    v = v / (zd.clone() - Dual::constant(w.clone()));
                }
                v
            };
            let Ok(rep) = newton_root(f, seed, tol, NEWTON_STEPS) else { continue };
            let z = rep.root;
            let plain = map.critical_equation(&Dual::variable(z.clone())).value.abs();
            let scale = mp(1e-20, ctx) * (z.abs() + mp(1e-300, ctx));
            let new = !z.is_zero() && roots.iter().all(|w| (w.clone() - z.clone()).abs() > scale);
            if new && plain < mp(1e-20, ctx) {
                roots.push(z.clone());
                found.push(z);
            }
        }
    }
    found
}

fn ring_points_distinct(spec: &MapSpec, points: &[CriticalPoint]) -> bool {
    let (Some(d), Some(rings)) = (&spec.degrees, &spec.rings) else { return true };
    let ctx = spec.precision;
    for i in 1..d.n() {
        let pts: Vec<&Complex<Mp>> = points
            .iter()
            .filter(|p| matches!(p.marker, CriticalMarker::Ring { ring, .. } if ring == i))
            .filter_map(|p| p.location.finite())
            .collect();
        let pi = <Mp as Real>::pi(ctx);
        let sep = rings.value(i).abs() * <Mp as Real>::sin(&(pi / mp(d.big_d(i) as f64, ctx)));
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if (pts[a].clone() - pts[b].clone()).abs() <= sep {
                    return false;
                }
            }
        }
    }
    true
}
