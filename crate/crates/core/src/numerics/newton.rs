use super::complex::Complex;
use super::dual::{Dual, RealDual, Scalar};
use super::real::Real;
use super::NumericsError;

#[derive(Clone, Debug)]
pub struct RootReport<R> {
    pub root: Complex<R>,
    pub iterations: usize,
    /// |f| at every iterate, starting with the seed.
    pub residuals: Vec<f64>,
}

/// Scalar Newton iteration. `f` returns the value and derivative at a point.
pub fn newton_root<R, F>(
    f: F,
    seed: Complex<R>,
    tol: &R,
    max_iter: usize,
) -> Result<RootReport<R>, NumericsError>
where
    R: Real,
    F: Fn(&Complex<R>) -> Dual<R>,
{
    let ctx = seed.ctx();
    let floor = tol.clone() * R::epsilon(ctx);
    let mut z = seed;
    let mut residuals = Vec::new();
    for k in 0..=max_iter {
        let fz = f(&z);
        let r = fz.value.abs();
        residuals.push(r.to_f64());
        if r < *tol {
            return Ok(RootReport { root: z, iterations: k, residuals });
        }
        if k == max_iter {
            break;
        }
        if fz.derivative.abs() <= floor {
            return Err(NumericsError::DerivativeUnderflow);
        }
        z = z - fz.value / fz.derivative;
        if !z.is_finite() {
            return Err(NumericsError::DerivativeUnderflow);
        }
    }
    Err(NumericsError::NonConvergence { iterations: max_iter })
}

/// A square system of real equations whose residual code is generic over the
/// scalar type, so forward-mode Jacobians come for free.
pub trait System<R: Real> {
    fn dim(&self) -> usize;
    fn residual<T: Scalar<R>>(&self, x: &[T]) -> Vec<T>;
}

#[derive(Clone, Debug)]
pub struct SystemReport<R> {
    pub solution: Vec<R>,
    pub iterations: usize,
    /// Infinity norm of the residual at every iterate, seed first.
    pub residuals: Vec<f64>,
    pub residual_norm: R,
}

pub fn inf_norm<R: Real>(v: &[R]) -> R {
    v.iter()
        .map(|x| x.abs())
        .fold(v[0].int(0), |a, b| a.max_of(b))
}

/// Value and Jacobian at `x`: one dual pass per column.
pub fn jacobian<R: Real, S: System<R>>(sys: &S, x: &[R]) -> (Vec<R>, Vec<Vec<R>>) {
    let m = sys.dim();
    let mut jac = vec![Vec::with_capacity(m); m];
    let mut value = Vec::new();
    for j in 0..m {
        let xs: Vec<RealDual<R>> = x
            .iter()
            .enumerate()
            .map(|(i, xi)| RealDual::new(xi.clone(), xi.int((i == j) as i64)))
            .collect();
        let out = sys.residual(&xs);
        for (i, o) in out.into_iter().enumerate() {
            if j == 0 {
                value.push(o.value.clone());
            }
            jac[i].push(o.derivative);
        }
    }
    (value, jac)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear<R: Real>(mut a: Vec<Vec<R>>, mut b: Vec<R>) -> Result<Vec<R>, NumericsError> {
    let m = b.len();
    for col in 0..m {
        let mut piv = col;
        for row in col + 1..m {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].is_zero() || !a[piv][col].is_finite() {
            return Err(NumericsError::SingularJacobian);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let factor = a[row][col].clone() / a[col][col].clone();
            for k in col..m {
                let t = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - t;
            }
            let t = factor * b[col].clone();
            b[row] = b[row].clone() - t;
        }
    }
    let mut x = b.clone();
    for row in (0..m).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..m {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Ok(x)
}

/// Newton iteration Λ ← Λ − Jac(Λ)⁻¹ F(Λ) until ‖F‖∞ < tol.
pub fn newton_system<R: Real, S: System<R>>(
    sys: &S,
    seed: Vec<R>,
    tol: &R,
    max_iter: usize,
) -> Result<SystemReport<R>, NumericsError> {
    let mut x = seed;
    let mut residuals = Vec::new();
    for k in 0..=max_iter {
        let (f, jac) = jacobian(sys, &x);
        let norm = inf_norm(&f);
        residuals.push(norm.to_f64());
        if !norm.is_finite() {
            return Err(NumericsError::NonConvergence { iterations: k });
        }
        if norm < *tol {
            return Ok(SystemReport { solution: x, iterations: k, residuals, residual_norm: norm });
        }
        if k == max_iter {
            break;
        }
        let step = solve_linear(jac, f)?;
        x = x.into_iter().zip(step).map(|(a, b)| a - b).collect();
    }
    Err(NumericsError::NonConvergence { iterations: max_iter })
}
