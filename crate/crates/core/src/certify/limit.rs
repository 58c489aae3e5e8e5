use super::CertifyError;
use crate::families::{Coefficients, Map, MapKind, MapSpec};
use crate::numerics::{mp, Complex, Mp, Point, PrecisionContext, Real};

/// Which normalization of the map is compared with its limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitChart {
    /// P, Q against h_{d_1}; R∘R against h_{d_1,d_n}.
    Direct,
    /// φ∘Q∘φ with φ(z) = s^ν/z against h_{d_n}; ψ∘R∘R∘ψ with ψ(z) = z_0/z against h_{d_1 d_n}.
    Conjugated,
}

/// The parabolic map the family converges to as s → 0.
pub fn limit_map(spec: &MapSpec, chart: LimitChart) -> Result<MapSpec, CertifyError> {
    let d = spec.degrees()?;
    let (d1, dn) = (d.first(), d.last());
    let kind = match (spec.kind, chart) {
        (MapKind::ParabolicP | MapKind::ParabolicQ, LimitChart::Direct) => MapKind::RefRatH { n: d1 },
        (MapKind::ParabolicQ, LimitChart::Conjugated) => MapKind::RefRatH { n: dn },
        (MapKind::ParabolicR, LimitChart::Direct) => MapKind::RefRatHmn { m: d1, n: dn },
        (MapKind::ParabolicR, LimitChart::Conjugated) => MapKind::RefRatH { n: d1 * dn },
        (k, c) => return Err(CertifyError::Unsupported(format!("no {c:?} limit map for {k:?}"))),
    };
    Ok(MapSpec::reference(kind, spec.precision)?)
}

/// `count` points e^{2πik/count} on the unit circle.
pub fn unit_circle_samples(count: usize, ctx: PrecisionContext) -> Vec<Complex<Mp>> {
    let two_pi = mp(2.0, ctx) * <Mp as Real>::pi(ctx);
    let one = mp(1.0, ctx);
    (0..count)
        .map(|k| Complex::from_polar(&one, &(two_pi.clone() * mp(k as f64, ctx) / mp(count as f64, ctx))))
        .collect()
}

/// sup over the samples of |F(z) − limit(z)|, where F is the map (twice
/// iterated for R) in the requested chart.
pub fn limit_map_deviation(
    spec: &MapSpec,
    chart: LimitChart,
    samples: &[Complex<Mp>],
) -> Result<Mp, CertifyError> {
    let ctx = spec.precision;
    let limit = Map::<Mp>::new(&limit_map(spec, chart)?, ctx);
    let map = Map::<Mp>::new(spec, ctx);
    let iterate = if spec.kind == MapKind::ParabolicR { 2 } else { 1 };
    let conj = match (chart, &spec.coeffs) {
        (LimitChart::Direct, _) => None,
        (LimitChart::Conjugated, Coefficients::R { z0, .. }) => Some(Complex::real(z0.clone())),
        (LimitChart::Conjugated, _) => Some(Complex::real(spec.s_nu().unwrap())),
    };
    let flip = |z: Point<Mp>| -> Point<Mp> {
        match (&conj, z) {
            (None, z) => z,
            (Some(_), Point::Finite(w)) if w.is_zero() => Point::Infinity,
            (Some(c), Point::Finite(w)) => Point::Finite(c.clone() / w),
            (Some(_), Point::Infinity) => Point::Finite(Complex::zero(ctx)),
        }
    };
    let mut sup = mp(0.0, ctx);
    for z in samples {
        let z = Point::Finite(z.clone());
        let a = flip(map.iterate(&flip(z.clone()), iterate));
        let b = limit.eval(&z);
        let dev = match (a, b) {
            (Point::Finite(a), Point::Finite(b)) => (a - b).abs(),
            (Point::Infinity, Point::Infinity) => mp(0.0, ctx),
            _ => mp(f64::INFINITY, ctx),
        };
        sup = sup.max_of(dev);
    }
    Ok(sup)
}
