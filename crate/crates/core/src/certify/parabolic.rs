use serde::Serialize;

use super::{Check, CertifyError};
use crate::families::{Coefficients, Map, MapKind, MapSpec, MapValue};
use crate::numerics::{mp, Complex, Dual, Mp, Point, PrecisionContext, Real};

/// 10^{20 − digits}: 10⁻³⁰ at the default 50 digits.
pub fn parabolic_tolerance(ctx: PrecisionContext) -> Mp {
    <Mp as Real>::powi(&mp(10.0, ctx), 20 - ctx.significant_digits as i32)
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn dual_at(map: &Map<Mp>, z: &Complex<Mp>) -> Result<Dual<Mp>, CertifyError> {
    match map.eval_dual(&Point::Finite(z.clone())) {
        MapValue::Finite(d) => Ok(d),
        MapValue::Infinity { .. } => Err(CertifyError::Failed(format!("pole at {}", z.to_f64()))),
    }
}

/// Residuals of the parabolic identities: f(1) = 1, f′(1) = 1 for P; the same at
/// s^ν for Q; f(1) = z_0, f(z_0) = 1, f′(1)f′(z_0) = 1 for R.
pub fn check_parabolic(spec: &MapSpec) -> Result<ParabolicReport, CertifyError> {
    let ctx = spec.precision;
    let map = Map::<Mp>::new(spec, ctx);
    let tol = parabolic_tolerance(ctx);
    let one = Complex::<Mp>::one(ctx);
    let mut res: Vec<(String, Mp)> = Vec::new();
    let mut fixed = |name: &str, p: &Complex<Mp>| -> Result<(), CertifyError> {
        let d = dual_at(&map, p)?;
        res.push((format!("f({name}) - {name}"), (d.value - p.clone()).abs()));
        res.push((format!("f'({name}) - 1"), (d.derivative - one.clone()).abs()));
        Ok(())
    };
    match spec.kind {
        MapKind::ParabolicP => fixed("1", &one)?,
        MapKind::ParabolicQ => {
            fixed("1", &one)?;
            fixed("s^nu", &Complex::real(spec.s_nu().unwrap()))?;
        }
        MapKind::ParabolicR => {
            let Coefficients::R { z0, .. } = &spec.coeffs else { unreachable!() };
            let z0 = Complex::real(z0.clone());
            let a = dual_at(&map, &one)?;
            let b = dual_at(&map, &z0)?;
            res.push(("f(1) - z0".into(), (a.value - z0.clone()).abs()));
            res.push(("f(z0) - 1".into(), (b.value - one.clone()).abs()));
            res.push(("f'(1)f'(z0) - 1".into(), (a.derivative * b.derivative - one.clone()).abs()));
        }
        MapKind::RefPolyG { .. }
        | MapKind::RefPolyGmn { .. }
        | MapKind::RefRatH { .. }
        | MapKind::RefRatHmn { .. } => fixed("1", &one)?,
        MapKind::HyperbolicF { .. } => {
            return Err(CertifyError::Unsupported("the hyperbolic family has no parabolic point".into()))
        }
    }
    let checks: Vec<Check> = res.into_iter().map(|(name, r)| Check::below(name, &r, &tol)).collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(ParabolicReport { checks, pass })
}
