//! Precision-generic real and complex arithmetic, forward-mode derivatives and
//! Newton iterations.

mod complex;
mod dual;
mod newton;
mod real;

pub use complex::{Complex, Point};
pub use dual::{ComplexScalar, Dual, RealDual, Scalar};
pub use newton::{
    inf_norm, jacobian, newton_root, newton_system, solve_linear, RootReport, System, SystemReport,
};
pub use real::{mp, mp_parse, PrecisionContext, Real};

/// Multiprecision real used on solver and certificate paths.
pub type Mp = rug::Float;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("Newton iteration did not converge within {iterations} steps")]
    NonConvergence { iterations: usize },
    #[error("derivative underflow during Newton iteration")]
    DerivativeUnderflow,
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("cannot parse decimal value {0:?}")]
    Parse(String),
    #[error("precision of {0} digits is below the minimum of 15")]
    PrecisionTooLow(u32),
}
