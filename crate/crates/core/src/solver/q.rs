use super::{named, AsymptoticRatio, CoefficientSolution, SolverError};
use crate::families::{make_schedule, rational, DegreeVector, Family, MapSpec, RingParameters};
use crate::numerics::{mp, newton_system, Mp, PrecisionContext, Real, Scalar, System};

/// Constants of the four-equation system making 1 and s^ν parabolic fixed points of Q.
#[derive(Clone, Debug)]
pub struct QSystemState {
    pub d: DegreeVector,
    pub b: RingParameters,
    pub s: Mp,
    pub s_nu: Mp,
    pub rho: [Mp; 4],
    s_nu_d1: Mp,
}

impl QSystemState {
    pub fn new(d: &DegreeVector, s: &Mp) -> Result<Self, SolverError> {
        if !d.is_odd() || d.n() < 3 {
            return Err(SolverError::NeedOddN(d.n()));
        }
        let ctx = s.ctx();
        let b = make_schedule(Family::Q, d, s, None)?;
        let nu: Mp = rational(d.nu(), ctx);
        let sv = <Mp as Real>::powf(s, &nu);
        let one = mp(1.0, ctx);
        let (d1, dn) = (d.first() as i32, d.last() as i32);

        let mut rho1 = one.clone();
        let mut rho2 = mp(d1 as f64, ctx) * <Mp as Real>::powi(&sv, dn - 1);
        let mut rho3 = mp(0.0, ctx);
        let mut rho4 = mp(0.0, ctx);
        for i in 1..d.n() {
            let big_d = d.big_d(i) as i32;
            let p = <Mp as Real>::powi(&b.moduli[i - 1], big_d);
            let svd = <Mp as Real>::powi(&sv, big_d);
            let m1 = one.clone() - p.clone();
            let m2 = svd.clone() - p.clone();
            if m1.is_zero() || m2.is_zero() {
                return Err(SolverError::DegenerateDenominator);
            }
            let dd = mp(big_d as f64, ctx);
            let t3 = dd.clone() * p / m1.clone();
            let t4 = dd * svd / m2.clone();
            if i % 2 == 1 {
                rho1 *= m1;
                rho2 *= m2;
                rho3 += t3;
                rho4 += t4;
            } else {
                rho1 /= m1;
                rho2 /= m2;
                rho3 -= t3;
                rho4 -= t4;
            }
        }
        let s_nu_d1 = <Mp as Real>::powi(&sv, d1);
        Ok(QSystemState { d: d.clone(), b, s: s.clone(), s_nu: sv, rho: [rho1, rho2, rho3, rho4], s_nu_d1 })
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.s.ctx()
    }

    /// (x_n, y_n, w_n), the limits of (X−1)/s^ν, Y/s^ν, W/s^ν.
    pub fn seed_constants(&self) -> (Mp, Mp, Mp) {
        let c = self.ctx();
        let (d1, dn) = (self.d.first() as i64, self.d.last() as i64);
        let xn = <Mp as Real>::ratio(d1 * (d1 - 3) * (dn - 1), (d1 - 1) * (d1 - 1) * dn, c);
        let yn = <Mp as Real>::ratio(2 * d1 * (dn - 1), (d1 - 1) * dn, c);
        let wn = <Mp as Real>::ratio(dn - 1, dn, c);
        (xn, yn, wn)
    }

    pub fn seed(&self) -> Vec<Mp> {
        let (xn, yn, wn) = self.seed_constants();
        let one = mp(1.0, self.ctx());
        vec![
            one.clone() + xn * self.s_nu.clone(),
            yn * self.s_nu.clone(),
            one,
            wn * self.s_nu.clone(),
        ]
    }

    /// Half-widths s^{ν+β_k} of the box Θ, with β = (1, 2, 3, 4)·ν/(4 d_max).
    pub fn theta_half_widths(&self) -> [Mp; 4] {
        let c = self.ctx();
        let nu: Mp = rational(self.d.nu(), c);
        let dm = mp(self.d.dmax() as f64, c);
        let beta = |k: f64| nu.clone() * mp(k, c) / (mp(4.0, c) * dm.clone());
        let w = |k: f64| <Mp as Real>::powf(&self.s, &(nu.clone() + beta(k)));
        [w(1.0), w(2.0), w(3.0), w(4.0)]
    }

    pub fn in_theta(&self, lambda: &[Mp]) -> bool {
        let centre = {
            let mut c = self.seed();
            c[2] = mp(1.0, self.ctx());
            c
        };
        let hw = self.theta_half_widths();
        (0..4).all(|k| <Mp as Real>::abs(&(lambda[k].clone() - centre[k].clone())) < hw[k])
    }
}

impl System<Mp> for QSystemState {
    fn dim(&self) -> usize {
        4
    }

    fn residual<T: Scalar<Mp>>(&self, v: &[T]) -> Vec<T> {
        let c = self.ctx();
        let k = |x: f64| T::lift(mp(x, c));
        let l = |x: &Mp| T::lift(x.clone());
        let (x, y, z, w) = (v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
        let d1 = self.d.first() as f64;
        let dn = self.d.last() as f64;
        let [r1, r2, r3, r4] = &self.rho;
        let sv = l(&self.s_nu);
        let svd1 = l(&self.s_nu_d1);
        let one = k(1.0);

        let den1 = k(d1 - 1.0) * x.clone() + y.clone() + z.clone();
        let den2 = k(d1 - 1.0) * svd1.clone() * x.clone() + sv.clone() * y.clone() + z.clone();

        let f1 = k(d1) * l(r1) / den1.clone() + w.clone() - one.clone();
        let f2 = l(r2) / den2.clone() + w.clone() / sv.clone() - one.clone();
        let f3 = one.clone() / (one.clone() - w.clone())
            - l(r3)
            - (k(d1 - 1.0) * y.clone() + k(d1) * z) / den1;
        let f4 = one.clone() / (one - w / sv.clone()) - l(r4) - k(dn)
            + (k((d1 - 1.0) * d1) * svd1 * x + sv * y) / den2;
        vec![f1, f2, f3, f4]
    }
}

/// (f_1, f_2, f_3, f_4) at Λ = (x, y, z, w).
pub fn residual_q(state: &QSystemState, lambda: &[Mp]) -> Vec<Mp> {
    state.residual(lambda)
}

pub fn solve_q(d: &DegreeVector, s: &Mp) -> Result<CoefficientSolution, SolverError> {
    let ctx = s.ctx();
    let state = QSystemState::new(d, s)?;
    let tol = super::tolerance(ctx);
    let report = newton_system(&state, state.seed(), &tol, super::MAX_STEPS)?;
    let sol = report.solution.clone();
    let (xn, yn, wn) = state.seed_constants();
    let sv = state.s_nu.clone();
    let one = mp(1.0, ctx);
    let ratio = |name: &str, v: Mp, limit: Mp| AsymptoticRatio::new(name, v / sv.clone(), limit);
    let asymptotic = vec![
        ratio("(X-1)/s^nu", sol[0].clone() - one.clone(), xn),
        ratio("Y/s^nu", sol[1].clone(), yn),
        ratio("(Z-1)/s^nu", sol[2].clone() - one, mp(0.0, ctx)),
        ratio("W/s^nu", sol[3].clone(), wn),
    ];
    let spec = MapSpec::parabolic_q(
        d.clone(),
        state.b.clone(),
        sol[0].clone(),
        sol[1].clone(),
        sol[2].clone(),
        sol[3].clone(),
    )?;
    let in_box = state.in_theta(&sol);
    Ok(CoefficientSolution {
        family: Family::Q,
        s: s.clone(),
        values: named(&["X", "Y", "Z", "W"], &sol),
        auxiliary: named(&["rho1", "rho2", "rho3", "rho4"], &state.rho),
        residual_norm: report.residual_norm,
        iterations: report.iterations,
        residual_history: report.residuals,
        asymptotic,
        in_seed_box: Some(in_box),
        spec,
    })
}
