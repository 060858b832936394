//! Damped Newton iteration with forward-difference Jacobians, shared by the
//! return-map fixed-point search and the Galerkin continuation.

use crate::linalg::{lu_solve, norm2};
use crate::scalar::{real, Real};

/// Solver knobs.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions<R> {
    /// Accept when the Euclidean residual norm falls below this gate.
    pub tol: R,
    /// Maximum Newton iterations.
    pub max_iterations: usize,
    /// Maximum step halvings per iteration before declaring divergence.
    pub max_halvings: usize,
    /// Forward-difference step scale: `h_j = fd_step · (1 + |u_j|)`.
    pub fd_step: R,
}

impl<R: Real> Default for NewtonOptions<R> {
    fn default() -> Self {
        NewtonOptions {
            tol: real(1e-9),
            max_iterations: 50,
            max_halvings: 30,
            fd_step: real(1e-7),
        }
    }
}

/// Converged iterate.
#[derive(Debug, Clone)]
pub struct NewtonResult<R> {
    pub solution: Vec<R>,
    pub residual_norm: R,
    pub iterations: usize,
}

/// Failure modes; `Eval` carries errors raised by the residual itself.
#[derive(Debug)]
pub enum NewtonError<E> {
    Diverged {
        iterations: usize,
        best_residual: f64,
    },
    SingularJacobian,
    Eval(E),
}

/// Solves `f(u) = 0` by damped Newton with a forward-difference Jacobian.
pub fn damped_newton<R, E, F>(
    mut f: F,
    u0: &[R],
    opts: &NewtonOptions<R>,
) -> Result<NewtonResult<R>, NewtonError<E>>
where
    R: Real,
    F: FnMut(&[R]) -> Result<Vec<R>, E>,
{
    let dim = u0.len();
    let mut u = u0.to_vec();
    let mut r = f(&u).map_err(NewtonError::Eval)?;
    assert_eq!(r.len(), dim, "residual dimension must match unknowns");
    let mut rn = norm2(&r);
    let half = real::<R>(0.5);

    for iteration in 0..opts.max_iterations {
        if rn < opts.tol {
            return Ok(NewtonResult {
                solution: u,
                residual_norm: rn,
                iterations: iteration,
            });
        }

        // Column-by-column forward differences.
        let mut jac = vec![R::zero(); dim * dim];
        for j in 0..dim {
            let h = opts.fd_step * (R::one() + u[j].abs());
            let saved = u[j];
            u[j] = saved + h;
            let r_pert = f(&u).map_err(NewtonError::Eval)?;
            u[j] = saved;
            for i in 0..dim {
                jac[i * dim + j] = (r_pert[i] - r[i]) / h;
            }
        }

        let mut step: Vec<R> = r.iter().map(|&v| -v).collect();
        if !lu_solve(&mut jac, &mut step, dim) {
            return Err(NewtonError::SingularJacobian);
        }

        // Backtracking on the residual norm.
        let mut lambda = R::one();
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<R> = u
                .iter()
                .zip(&step)
                .map(|(&ui, &di)| ui + lambda * di)
                .collect();
            let r_trial = f(&trial).map_err(NewtonError::Eval)?;
            let rn_trial = norm2(&r_trial);
            if rn_trial.is_finite() && rn_trial < rn {
                u = trial;
                r = r_trial;
                rn = rn_trial;
                accepted = true;
                break;
            }
            lambda *= half;
        }
        if !accepted {
            return Err(NewtonError::Diverged {
                iterations: iteration + 1,
                best_residual: rn.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    if rn < opts.tol {
        Ok(NewtonResult {
            solution: u,
            residual_norm: rn,
            iterations: opts.max_iterations,
        })
    } else {
        Err(NewtonError::Diverged {
            iterations: opts.max_iterations,
            best_residual: rn.to_f64().unwrap_or(f64::NAN),
        })
    }
}
