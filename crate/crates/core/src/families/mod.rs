//! The map families: P, Q, R, the hyperbolic family f, and the reference maps
//! g_n, g_{m,n}, h_n, h_{m,n}.

mod degrees;
mod map;
mod schedule;
mod spec;

pub use degrees::{rational, validate_degrees, DegreeVector, PowerProduct};
pub use map::{evaluate, Map, MapValue, CHART_RADIUS};
pub use schedule::{explicit_rings, make_schedule, Family, RingParameters};
pub use spec::{coefficients_p, Coefficients, MapKind, MapSpec, SpecDocument};

use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("degree constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("invalid ring parameters: {0}")]
    BadRings(String),
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
    #[error("invalid map kind: {0}")]
    BadKind(String),
    #[error("invalid map document: {0}")]
    BadDocument(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
