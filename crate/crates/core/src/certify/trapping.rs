use rayon::prelude::*;
use serde::Serialize;

use super::region::Trap;
use super::CertifyError;
use crate::families::{Map, MapSpec};
use crate::numerics::{mp, Complex, Mp, Point, Real};

pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Clone, Debug, Serialize)]
pub struct TrapSample {
    pub point: (f64, f64),
    /// None when the image is ∞.
    pub image: Option<(f64, f64)>,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrapReport {
    pub name: String,
    pub region: String,
    pub iterate: usize,
    pub samples: usize,
    /// Samples accepted through the petal condition rather than containment.
    pub petal_samples: usize,
    pub failures: usize,
    pub worst: Option<TrapSample>,
    pub first_failure: Option<TrapSample>,
    pub pass: bool,
}

enum Outcome {
    Inside(Mp),
    Petal,
    Outside(Mp),
}

/// Rectified coordinate ξ(z) = −1/(a(z − p)) at a parabolic point p with
/// F(z) = z + a(z − p)² + …; F acts near p as ξ ↦ ξ + 1.
struct Petal {
    p: Complex<Mp>,
    a: Complex<Mp>,
    radius: Mp,
}

impl Petal {
    fn xi_re(&self, z: &Complex<Mp>) -> Mp {
        let w = -(self.a.clone() * (z.clone() - self.p.clone())).recip();
        w.re
    }
}

fn second_coefficient(map: &Map<Mp>, p: &Complex<Mp>, iterate: usize) -> Result<Complex<Mp>, CertifyError> {
    let ctx = map.ctx();
    let scale = p.abs().max_of(mp(1e-300, ctx));
    let h = scale * <Mp as Real>::powi(&mp(10.0, ctx), -(ctx.significant_digits as i32) / 3);
    let hc = Complex::real(h.clone());
    let der = |z: Complex<Mp>| {
        map.iterate_dual(&z, iterate)
            .map(|d| d.derivative)
            .ok_or_else(|| CertifyError::Failed("parabolic point orbit hits a pole".into()))
    };
    let up = der(p.clone() + hc.clone())?;
    let down = der(p.clone() - hc)?;
    Ok((up - down).scale(&(mp(1.0, ctx) / (mp(4.0, ctx) * h))))
}

/// Samples the trap boundary and checks that the iterate maps every sample
/// strictly inside, or, near the parabolic point, moves it forward in the
/// rectified coordinate.
pub fn certify_trapping(spec: &MapSpec, trap: &Trap, samples: usize) -> Result<TrapReport, CertifyError> {
    let ctx = spec.precision;
    let map = Map::<Mp>::new(spec, ctx);
    let region = &trap.region;
    let petal = match &trap.parabolic {
        Some(p) => Some(Petal {
            p: p.clone(),
            a: second_coefficient(&map, p, trap.iterate)?,
            radius: mp(1e-6, ctx) * region.diameter(),
        }),
        None => None,
    };
    let pts = region.boundary_samples(samples);
    let outcomes: Vec<(Complex<Mp>, Point<Mp>, Outcome)> = pts
        .into_par_iter()
        .map(|z| {
            let img = map.iterate(&Point::Finite(z.clone()), trap.iterate);
            let margin = region.margin(&img);
            let out = if region.contains(&img) {
                Outcome::Inside(margin)
            } else {
                match (&petal, &img) {
                    (Some(pt), Point::Finite(w))
                        if (w.clone() - pt.p.clone()).abs() < pt.radius && pt.xi_re(w) > pt.xi_re(&z) =>
                    {
                        Outcome::Petal
                    }
                    _ => Outcome::Outside(margin),
                }
            };
            (z, img, out)
        })
        .collect();

    let sample = |z: &Complex<Mp>, img: &Point<Mp>, m: &Mp| TrapSample {
        point: (z.re.to_f64(), z.im.to_f64()),
        image: img.finite().map(|w| (w.re.to_f64(), w.im.to_f64())),
        margin: m.to_f64(),
    };
    let mut worst: Option<(Mp, TrapSample)> = None;
    let mut first_failure = None;
    let (mut petal_samples, mut failures) = (0, 0);
    for (z, img, out) in &outcomes {
        let m = match out {
            Outcome::Petal => {
                petal_samples += 1;
                continue;
            }
            Outcome::Inside(m) => m,
            Outcome::Outside(m) => {
                failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(sample(z, img, m));
                }
                m
            }
        };
        if worst.as_ref().is_none_or(|(w, _)| m > w) {
            worst = Some((m.clone(), sample(z, img, m)));
        }
    }
    Ok(TrapReport {
        name: trap.name.clone(),
        region: region.describe(),
        iterate: trap.iterate,
        samples: outcomes.len(),
        petal_samples,
        failures,
        worst: worst.map(|w| w.1),
        first_failure,
        pass: failures == 0,
    })
}
