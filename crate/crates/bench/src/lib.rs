//! Fixed maps shared by the benchmarks in benches/.

use cantor::families::{explicit_rings, validate_degrees, Family, MapSpec};
use cantor::numerics::{mp_parse, PrecisionContext};

pub fn ctx() -> PrecisionContext {
    PrecisionContext::new(50).expect("50 digits is a valid precision")
}

/// P with degrees `d` and explicit ring moduli.
pub fn parabolic_p(d: &[i64], moduli: &[&str]) -> MapSpec {
    let ctx = ctx();
    let d = validate_degrees(d).expect("valid degrees");
    let moduli = moduli.iter().map(|s| mp_parse(s, ctx).expect("valid literal")).collect();
    MapSpec::parabolic_p(d.clone(), explicit_rings(Family::P, &d, moduli, None).expect("valid rings"))
        .expect("valid map")
}

pub fn p33() -> MapSpec {
    parabolic_p(&[3, 3], &["0.25"])
}

pub fn p444() -> MapSpec {
    parabolic_p(&[4, 4, 4], &["0.1", "0.01"])
}
