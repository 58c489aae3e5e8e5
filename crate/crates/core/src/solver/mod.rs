//! Coefficient systems for the doubly parabolic family Q and the period-two
//! parabolic family R, solved by multiprecision Newton iteration.

mod q;
mod r;

use rayon::prelude::*;
use serde::Serialize;

pub use q::{residual_q, solve_q, QSystemState};
pub use r::{residual_r, solve_r, RSystemState};

use crate::families::{DegreeVector, Family, FamilyError, MapSpec};
use crate::numerics::{mp, Mp, NumericsError, PrecisionContext, Real};

pub const MAX_STEPS: usize = 60;

/// 10^{−(digits − 10)}.
pub fn tolerance(ctx: PrecisionContext) -> Mp {
    let ten = mp(10.0, ctx);
    <Mp as Real>::powi(&ten, -(ctx.significant_digits as i32 - 10))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("this system needs odd n >= 3, got n = {0}")]
    NeedOddN(usize),
    #[error("degenerate denominator in the coefficient system")]
    DegenerateDenominator,
    #[error("s grid must be strictly decreasing")]
    BadGrid,
    #[error("family {0:?} has no coefficient system")]
    NoSystem(Family),
    #[error("solver precision must be at least {min} digits, got {got}")]
    PrecisionTooLow { min: u32, got: u32 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticRatio {
    pub name: String,
    pub ratio: Mp,
    pub limit: Mp,
    pub deviation: Mp,
}

impl AsymptoticRatio {
    fn new(name: &str, ratio: Mp, limit: Mp) -> Self {
        let deviation = <Mp as Real>::abs(&(ratio.clone() - limit.clone()));
        AsymptoticRatio { name: name.to_string(), ratio, limit, deviation }
    }
}

#[derive(Clone, Debug)]
pub struct CoefficientSolution {
    pub family: Family,
    pub s: Mp,
    /// Solved coefficients by name.
    pub values: Vec<(String, Mp)>,
    /// Intermediate quantities (ρ_k for Q, κ_k for R).
    pub auxiliary: Vec<(String, Mp)>,
    pub residual_norm: Mp,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub asymptotic: Vec<AsymptoticRatio>,
    /// Whether the solution lies in the seed box Θ (Q only).
    pub in_seed_box: Option<bool>,
    pub spec: MapSpec,
}

impl CoefficientSolution {
    pub fn get(&self, name: &str) -> Option<&Mp> {
        self.values
            .iter()
            .chain(self.auxiliary.iter())
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn report(&self) -> SolutionReport {
        let digits = self.spec.precision.roundtrip_digits();
        let f = |v: &Mp| v.to_decimal(digits);
        SolutionReport {
            family: self.family,
            degrees: self.spec.degrees.clone(),
            s: f(&self.s),
            precision: self.spec.precision.significant_digits,
            values: self.values.iter().map(|(n, v)| (n.clone(), f(v))).collect(),
            auxiliary: self.auxiliary.iter().map(|(n, v)| (n.clone(), f(v))).collect(),
            residual_norm: self.residual_norm.to_decimal(6),
            iterations: self.iterations,
            residual_history: self.residual_history.clone(),
            asymptotic: self
                .asymptotic
                .iter()
                .map(|a| AsymptoticRow {
                    name: a.name.clone(),
                    ratio: a.ratio.to_decimal(20),
                    limit: a.limit.to_decimal(20),
                    deviation: a.deviation.to_decimal(6),
                })
                .collect(),
            in_seed_box: self.in_seed_box,
        }
    }
}

fn named(names: &[&str], vals: &[Mp]) -> Vec<(String, Mp)> {
    names.iter().zip(vals).map(|(n, v)| (n.to_string(), v.clone())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticRow {
    pub name: String,
    pub ratio: String,
    pub limit: String,
    pub deviation: String,
}

/// JSON-friendly solution report; numbers as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionReport {
    pub family: Family,
    pub degrees: Option<DegreeVector>,
    pub s: String,
    pub precision: u32,
    pub values: Vec<(String, String)>,
    pub auxiliary: Vec<(String, String)>,
    pub residual_norm: String,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub asymptotic: Vec<AsymptoticRow>,
    pub in_seed_box: Option<bool>,
}

pub fn solve(family: Family, d: &DegreeVector, s: &Mp) -> Result<CoefficientSolution, SolverError> {
    let got = s.ctx().significant_digits;
    if got < PrecisionContext::SOLVER_MIN_DIGITS {
        return Err(SolverError::PrecisionTooLow { min: PrecisionContext::SOLVER_MIN_DIGITS, got });
    }
    match family {
        Family::Q => solve_q(d, s),
        Family::R => solve_r(d, s),
        other => Err(SolverError::NoSystem(other)),
    }
}

#[derive(Clone, Debug)]
pub struct RegressionTable {
    pub rows: Vec<CoefficientSolution>,
    /// For each asymptotic ratio, whether its deviation is non-increasing along the grid.
    pub monotone: Vec<(String, bool)>,
}

impl RegressionTable {
    pub fn deviations(&self, name: &str) -> Vec<Mp> {
        self.rows
            .iter()
            .map(|r| r.asymptotic.iter().find(|a| a.name == name).unwrap().deviation.clone())
            .collect()
    }

    pub fn is_monotone(&self, name: &str) -> bool {
        self.monotone.iter().any(|(n, m)| n == name && *m)
    }
}

/// Solves on every s of a strictly decreasing grid and tabulates the asymptotic ratios.
pub fn asymptotic_regression(
    family: Family,
    d: &DegreeVector,
    s_grid: &[Mp],
) -> Result<RegressionTable, SolverError> {
    if s_grid.windows(2).any(|w| w[1] >= w[0]) || s_grid.is_empty() {
        return Err(SolverError::BadGrid);
    }
    let rows: Vec<CoefficientSolution> = s_grid
        .par_iter()
        .map(|s| solve(family, d, s))
        .collect::<Result<_, _>>()?;
    let names: Vec<String> = rows[0].asymptotic.iter().map(|a| a.name.clone()).collect();
    let monotone = names
        .iter()
        .map(|n| {
            let dev: Vec<Mp> = rows
                .iter()
                .map(|r| r.asymptotic.iter().find(|a| &a.name == n).unwrap().deviation.clone())
                .collect();
            (n.clone(), dev.windows(2).all(|w| w[1] <= w[0]))
        })
        .collect();
    Ok(RegressionTable { rows, monotone })
}
