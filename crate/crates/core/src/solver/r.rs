use super::{named, AsymptoticRatio, CoefficientSolution, SolverError};
use crate::families::{make_schedule, rational, DegreeVector, Family, MapSpec, RingParameters};
use crate::numerics::{mp, newton_system, Mp, PrecisionContext, Real, Scalar, System};

/// Constants of the three-equation system making {1, z_0} a parabolic 2-cycle of R,
/// in the normalized unknowns (I, J, z_1).
#[derive(Clone, Debug)]
pub struct RSystemState {
    pub d: DegreeVector,
    pub c: RingParameters,
    pub s: Mp,
    pub s_nu: Mp,
    pub mu: Mp,
    /// κ_1 and κ_3; κ_2 and κ_4 depend on z_1.
    pub kappa1: Mp,
    pub kappa3: Mp,
    q: Vec<Mp>,
}

impl RSystemState {
    pub fn new(d: &DegreeVector, s: &Mp) -> Result<Self, SolverError> {
        if !d.is_odd() || d.n() < 3 {
            return Err(SolverError::NeedOddN(d.n()));
        }
        let ctx = s.ctx();
        let c = make_schedule(Family::R, d, s, None)?;
        let nu: Mp = rational(d.nu(), ctx);
        let sv = <Mp as Real>::powf(s, &nu);
        let mu: Mp = d.mu().eval(ctx);
        let one = mp(1.0, ctx);
        let mut kappa1 = one.clone();
        let mut kappa3 = mp(0.0, ctx);
        let mut q = Vec::new();
        for i in 1..d.n() {
            let big_d = d.big_d(i) as i32;
            let qi = <Mp as Real>::powi(&c.moduli[i - 1], big_d);
            let m = one.clone() - qi.clone();
            if m.is_zero() {
                return Err(SolverError::DegenerateDenominator);
            }
            let t = mp(big_d as f64, ctx) * qi.clone() / m.clone();
            // (−1)^i
            if i % 2 == 0 {
                kappa1 *= m;
                kappa3 += t;
            } else {
                kappa1 /= m;
                kappa3 -= t;
            }
            q.push(qi);
        }
        Ok(RSystemState { d: d.clone(), c, s: s.clone(), s_nu: sv, mu, kappa1, kappa3, q })
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.s.ctx()
    }

    /// μ s^ν.
    pub fn scale(&self) -> Mp {
        self.mu.clone() * self.s_nu.clone()
    }

    fn dd(&self) -> i64 {
        (self.d.first() * self.d.last()) as i64
    }

    /// (κ_2, κ_4) at z_1.
    pub fn kappa24<T: Scalar<Mp>>(&self, z1: &T) -> (T, T) {
        let c = self.ctx();
        let z0 = T::lift(mp(self.dd() as f64, c) * self.scale()) * z1.clone();
        let one = T::lift(mp(1.0, c));
        let mut k2 = one.clone();
        let mut k4 = T::lift(mp(0.0, c));
        for i in 1..self.d.n() {
            let big_d = self.d.big_d(i) as i32;
            let zd = z0.powi(big_d);
            let qi = T::lift(self.q[i - 1].clone());
            let f = zd.clone() / qi.clone() - one.clone();
            let t = T::lift(mp(big_d as f64, c)) * zd.clone() / (zd - qi);
            if i % 2 == 0 {
                k2 = k2 * f;
                k4 = k4 + t;
            } else {
                k2 = k2 / f;
                k4 = k4 - t;
            }
        }
        (k2, k4)
    }

    /// Converts (I, J, z_1) to (S, T, z_0).
    pub fn coefficients(&self, lambda: &[Mp]) -> (Mp, Mp, Mp) {
        let ms = self.scale();
        let dd = self.dd();
        (
            ms.clone() * lambda[0].clone(),
            mp((dd - 1) as f64, self.ctx()) * ms.clone() * lambda[1].clone(),
            mp(dd as f64, self.ctx()) * ms * lambda[2].clone(),
        )
    }
}

impl System<Mp> for RSystemState {
    fn dim(&self) -> usize {
        3
    }

    fn residual<T: Scalar<Mp>>(&self, v: &[T]) -> Vec<T> {
        let c = self.ctx();
        let k = |x: f64| T::lift(mp(x, c));
        let (i, j, z1) = (v[0].clone(), v[1].clone(), v[2].clone());
        let dd = self.dd() as f64;
        let ms = T::lift(self.scale());
        let (k2, k4) = self.kappa24(&z1);
        let one = k(1.0);
        let d1 = self.d.first() as f64;
        let dn = self.d.last() as f64;

        let f1 = T::lift(self.kappa1.clone()) * i.clone() + k(dd - 1.0) * j.clone() - k(dd) * z1.clone();
        let f2 = k2 * i / z1.powi(self.d.last() as i32) + k(dd - 1.0) * ms.clone() * j.clone() - one.clone();
        let lhs = z1.clone()
            / ((k(dd) * z1 - k(dd - 1.0) * j.clone()) * (one.clone() - k(dd - 1.0) * ms * j));
        let rhs = (one.clone() - T::lift(self.kappa3.clone()) / k(d1)) * (one - k4 / k(dn));
        vec![f1, f2, lhs - rhs]
    }
}

pub fn residual_r(state: &RSystemState, lambda: &[Mp]) -> Vec<Mp> {
    state.residual(lambda)
}

pub fn solve_r(d: &DegreeVector, s: &Mp) -> Result<CoefficientSolution, SolverError> {
    let ctx = s.ctx();
    let state = RSystemState::new(d, s)?;
    let tol = super::tolerance(ctx);
    let one = mp(1.0, ctx);
    let report = newton_system(&state, vec![one.clone(), one.clone(), one], &tol, super::MAX_STEPS)?;
    let sol = report.solution.clone();
    let (sc, tc, z0) = state.coefficients(&sol);
    let dd = state.dd();
    let sv = state.s_nu.clone();
    let mu = state.mu.clone();
    let ratio = |name: &str, v: &Mp, limit: Mp| AsymptoticRatio::new(name, v.clone() / sv.clone(), limit);
    let asymptotic = vec![
        ratio("S/s^nu", &sc, mu.clone()),
        ratio("T/s^nu", &tc, mp((dd - 1) as f64, ctx) * mu.clone()),
        ratio("z0/s^nu", &z0, mp(dd as f64, ctx) * mu),
    ];
    let spec = MapSpec::parabolic_r(d.clone(), state.c.clone(), sc.clone(), tc.clone(), z0.clone())?;
    let (k2, k4) = state.kappa24(&sol[2]);
    let mut values = named(&["S", "T", "z0"], &[sc, tc, z0]);
    values.extend(named(&["I", "J", "z1"], &sol));
    Ok(CoefficientSolution {
        family: Family::R,
        s: s.clone(),
        values,
        auxiliary: named(
            &["kappa1", "kappa2", "kappa3", "kappa4", "mu*s^nu"],
            &[state.kappa1.clone(), k2, state.kappa3.clone(), k4, state.scale()],
        ),
        residual_norm: report.residual_norm,
        iterations: report.iterations,
        residual_history: report.residuals,
        asymptotic,
        in_seed_box: None,
        spec,
    })
}
