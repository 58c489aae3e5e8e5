use serde::{Deserialize, Serialize};

use super::degrees::DegreeVector;
use super::FamilyError;
use crate::numerics::{mp, Complex, Mp, PrecisionContext, Real};

/// Which ring schedule a family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    HyperbolicF,
    P,
    Q,
    R,
}

impl Family {
    fn requires_real(self) -> bool {
        matches!(self, Family::Q | Family::R)
    }
}

/// Ring values a_i (or b_i, c_i) as moduli and phases, with the scale s.
#[derive(Clone, Debug, PartialEq)]
pub struct RingParameters {
    pub moduli: Vec<Mp>,
    pub phases: Vec<Mp>,
    pub s: Mp,
}

impl RingParameters {
    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn value(&self, i: usize) -> Complex<Mp> {
        Complex::from_polar(&self.moduli[i - 1], &self.phases[i - 1])
    }

    pub fn values<R: Real>(&self, ctx: PrecisionContext) -> Vec<Complex<R>> {
        (1..=self.len()).map(|i| self.value(i).convert(ctx)).collect()
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.s.ctx()
    }

    pub fn is_real(&self) -> bool {
        self.phases.iter().all(|p| p.is_zero())
    }
}

fn kappa(family: Family, d: &DegreeVector, ctx: PrecisionContext) -> Mp {
    match family {
        Family::Q => d.tau().eval(ctx),
        _ => mp(1.0, ctx),
    }
}

fn check_phases(family: Family, n: usize, phases: &Option<Vec<Mp>>) -> Result<(), FamilyError> {
    if let Some(ph) = phases {
        if ph.len() != n {
            return Err(FamilyError::BadRings(format!("expected {n} phases, got {}", ph.len())));
        }
        if family.requires_real() && ph.iter().any(|p| !p.is_zero()) {
            return Err(FamilyError::BadRings("Q and R ring values must be positive reals".into()));
        }
    }
    Ok(())
}

/// |v_1| = (d_max² κ s)^{1/d_1}, |v_i| = (κ s)^{1/d_i} |v_{i−1}|, with κ = τ for Q, 1 otherwise.
pub fn make_schedule(
    family: Family,
    d: &DegreeVector,
    s: &Mp,
    phases: Option<Vec<Mp>>,
) -> Result<RingParameters, FamilyError> {
    if !(s.is_finite() && *s > 0) {
        return Err(FamilyError::BadRings("s must be positive".into()));
    }
    let ctx = s.ctx();
    let n = d.n() - 1;
    check_phases(family, n, &phases)?;
    let ks = kappa(family, d, ctx) * s.clone();
    let dm = mp(d.dmax() as f64, ctx);
    let inv = |k: u32| mp(1.0, ctx) / mp(k as f64, ctx);
    let mut moduli = Vec::with_capacity(n);
    moduli.push(<Mp as Real>::powf(&(dm.clone() * dm * ks.clone()), &inv(d.d(1))));
    for i in 2..=n {
        let next = <Mp as Real>::powf(&ks, &inv(d.d(i))) * moduli[i - 2].clone();
        moduli.push(next);
    }
    Ok(RingParameters {
        moduli,
        phases: phases.unwrap_or_else(|| vec![mp(0.0, ctx); n]),
        s: s.clone(),
    })
}

/// Ring parameters given explicitly. The scale s is the log-least-squares fit of
/// the schedule relations s_1 = |v_1|^{d_1}/(d_max² κ), s_i = (|v_i|/|v_{i−1}|)^{d_i}/κ,
/// i.e. their geometric mean; with one ring this inverts the schedule exactly.
pub fn explicit_rings(
    family: Family,
    d: &DegreeVector,
    moduli: Vec<Mp>,
    phases: Option<Vec<Mp>>,
) -> Result<RingParameters, FamilyError> {
    let n = d.n() - 1;
    if moduli.len() != n {
        return Err(FamilyError::BadRings(format!("expected {n} ring values, got {}", moduli.len())));
    }
    check_phases(family, n, &phases)?;
    for (i, m) in moduli.iter().enumerate() {
        if !(m.is_finite() && *m > 0) {
            return Err(FamilyError::BadRings(format!("ring value {} must be positive", i + 1)));
        }
        if i > 0 && *m >= moduli[i - 1] {
            return Err(FamilyError::BadRings("ring moduli must strictly decrease".into()));
        }
    }
    let ctx = moduli[0].ctx();
    let k = kappa(family, d, ctx);
    let dm = mp(d.dmax() as f64, ctx);
    let mut log_sum = mp(0.0, ctx);
    for i in 1..=n {
        let base = if i == 1 {
            moduli[0].clone()
        } else {
            moduli[i - 1].clone() / moduli[i - 2].clone()
        };
        let mut si = <Mp as Real>::powi(&base, d.d(i) as i32) / k.clone();
        if i == 1 {
            si /= dm.clone() * dm.clone();
        }
        log_sum += <Mp as Real>::ln(&si);
    }
    let s = <Mp as Real>::exp(&(log_sum / mp(n as f64, ctx)));
    Ok(RingParameters {
        moduli,
        phases: phases.unwrap_or_else(|| vec![mp(0.0, ctx); n]),
        s,
    })
}
