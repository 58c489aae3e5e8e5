//! Numerical certificates for the structural claims behind a constructed map:
//! parabolic points, critical points, trapping regions and limit maps.

mod critical;
mod limit;
mod parabolic;
mod region;
mod trapping;

use serde::Serialize;
use serde_json::{json, Value};

pub use critical::{
    certify_critical_points, reference_critical_points, CriticalMarker, CriticalPoint, CriticalReport,
    ReferencePoint,
};
pub use limit::{limit_map, limit_map_deviation, unit_circle_samples, LimitChart};
pub use parabolic::{check_parabolic, parabolic_tolerance, ParabolicReport};
pub use region::{canonical_traps, BasinTag, Region, Trap};
pub use trapping::{certify_trapping, TrapReport, TrapSample, DEFAULT_SAMPLES};

use crate::families::{make_schedule, DegreeVector, Family, FamilyError, MapSpec};
use crate::numerics::{mp, Mp, Real};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertifyError {
    #[error("certificate failed: {0}")]
    Failed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// One scalar check against a threshold.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: &Mp, threshold: &Mp) -> Self {
        Check { name: name.into(), value: value.to_f64(), threshold: threshold.to_f64(), pass: value < threshold }
    }
}

/// Order checks on a constructed schedule at scale s:
/// log|a_i|/log s against Σ_{j≤i} 1/d_j (5% relative), and
/// |a_i/a_j|^{D_i} ≤ s^{1+2/d_max} for j < i.
pub fn schedule_order_checks(family: Family, d: &DegreeVector, s: &Mp) -> Result<Vec<Check>, FamilyError> {
    let ctx = s.ctx();
    let rings = make_schedule(family, d, s, None)?;
    let ln_s = <Mp as Real>::ln(s);
    let mut out = Vec::new();
    let mut target = mp(0.0, ctx);
    for i in 1..d.n() {
        target += mp(1.0, ctx) / mp(d.d(i) as f64, ctx);
        let ratio = <Mp as Real>::ln(&rings.moduli[i - 1]) / ln_s.clone();
        let rel = <Mp as Real>::abs(&((ratio - target.clone()) / target.clone()));
        out.push(Check::below(format!("log|a_{i}|/log s"), &rel, &mp(0.05, ctx)));
    }
    let bound = <Mp as Real>::powf(s, &(mp(1.0, ctx) + mp(2.0, ctx) / mp(d.dmax() as f64, ctx)));
    for i in 1..d.n() {
        for j in 1..i {
            let q = rings.moduli[i - 1].clone() / rings.moduli[j - 1].clone();
            let v = <Mp as Real>::powi(&q, d.big_d(i) as i32);
            let pass = v <= bound;
            out.push(Check {
                name: format!("|a_{i}/a_{j}|^D_{i}"),
                value: v.to_f64(),
                threshold: bound.to_f64(),
                pass,
            });
        }
    }
    Ok(out)
}

/// Every certificate that applies to the map, as one JSON document.
pub fn certificate_bundle(spec: &MapSpec, samples: usize) -> (Value, bool) {
    let mut pass = true;
    let mut doc = serde_json::Map::new();
    match check_parabolic(spec) {
        Ok(r) => {
            pass &= r.pass;
            doc.insert("parabolic".into(), json!(r));
        }
        Err(e) => {
            doc.insert("parabolic".into(), json!({ "skipped": e.to_string() }));
        }
    }
    match certify_critical_points(spec) {
        Ok(r) => {
            pass &= r.pass;
            doc.insert("critical_points".into(), r.to_json());
        }
        Err(e) => {
            doc.insert("critical_points".into(), json!({ "skipped": e.to_string() }));
        }
    }
    let mut traps = Vec::new();
    for t in canonical_traps(spec) {
        match certify_trapping(spec, &t, samples) {
            Ok(r) => {
                pass &= r.pass;
                traps.push(json!(r));
            }
            Err(e) => {
                pass = false;
                traps.push(json!({ "name": t.name, "error": e.to_string() }));
            }
        }
    }
    doc.insert("trapping".into(), Value::Array(traps));
    let circle = unit_circle_samples(256, spec.precision);
    let mut limits = serde_json::Map::new();
    for chart in [LimitChart::Direct, LimitChart::Conjugated] {
        if let Ok(dev) = limit_map_deviation(spec, chart, &circle) {
            limits.insert(format!("{chart:?}").to_lowercase(), json!(dev.to_f64()));
        }
    }
    doc.insert("limit_deviation".into(), Value::Object(limits));
    if let (Some(family), Some(d), Some(s)) = (spec.kind.family(), &spec.degrees, spec.s()) {
        if let Ok(checks) = schedule_order_checks(family, d, s) {
            doc.insert("schedule_order".into(), json!(checks));
        }
    }
    doc.insert("pass".into(), json!(pass));
    (Value::Object(doc), pass)
}
