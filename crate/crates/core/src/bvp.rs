//! Dirichlet problem `x'' − F(x)' + x = A sin t + shape(t)` on `[0, π]` with
//! `x(0) = x(π) = 0`, solved by sine-Galerkin projection.
//!
//! The solution is split as `x(t) = ξ sin t + X(t)` with `X` orthogonal to the
//! kernel `sin t`; for each first-harmonic amplitude `ξ` the solver finds the
//! forcing amplitude `A` and the higher coefficients, tracing the solution
//! curve `A(ξ)` with its fold.

use thiserror::Error;

use crate::newton::{damped_newton, NewtonError, NewtonOptions};
use crate::nonlinearity::SaturatingNonlinearity;
use crate::quadrature::{simpson_uniform, SIMPSON_PANELS};
use crate::scalar::{real, real_usize, Real};

/// Residual gate for accepted curve points.
pub const POINT_RESIDUAL_GATE: f64 = 1e-9;

/// Dirichlet problem data.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletProblem<R> {
    pub nonlinearity: SaturatingNonlinearity,
    /// Kernel-direction forcing amplitude `A` (used by the condition checks;
    /// the continuation solves for `A` itself).
    pub amplitude: R,
    /// Sine coefficients of the forcing beyond the kernel: `shape[j]` scales
    /// `sin((j + 2)t)`. The default shape is a unit second harmonic.
    pub shape: Vec<R>,
    /// Galerkin truncation order `N ≥ 2`.
    pub modes: usize,
}

impl<R: Real> DirichletProblem<R> {
    pub fn new(
        nonlinearity: SaturatingNonlinearity,
        amplitude: R,
        shape: Vec<R>,
        modes: usize,
    ) -> Self {
        assert!(modes >= 2, "Galerkin truncation must keep at least two modes");
        assert!(
            shape.len() < modes,
            "forcing shape has harmonics beyond the truncation order"
        );
        DirichletProblem {
            nonlinearity,
            amplitude,
            shape,
            modes,
        }
    }

    /// Figure-style default: unit `sin 2t` shape.
    pub fn with_default_shape(nonlinearity: SaturatingNonlinearity, amplitude: R, modes: usize) -> Self {
        DirichletProblem::new(nonlinearity, amplitude, vec![R::one()], modes)
    }

    /// Forcing `e(t) = A sin t + Σ shape_j sin((j+2)t)` on `[0, π]`.
    pub fn forcing(&self) -> impl Fn(R) -> R + '_ {
        move |t: R| {
            let mut acc = self.amplitude * t.sin();
            for (j, &s) in self.shape.iter().enumerate() {
                if s != R::zero() {
                    acc += s * (real_usize::<R>(j + 2) * t).sin();
                }
            }
            acc
        }
    }

    /// Sine coefficient of the forcing in mode `k` for a given kernel
    /// amplitude.
    fn forcing_coefficient(&self, k: usize, amplitude: R) -> R {
        if k == 1 {
            amplitude
        } else {
            self.shape.get(k - 2).copied().unwrap_or_else(R::zero)
        }
    }
}

/// One point of the solution curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCurvePoint<R> {
    /// First-harmonic amplitude `ξ` (continuation parameter).
    pub xi: R,
    /// Forcing amplitude `A` solving the problem at this `ξ`.
    pub amplitude: R,
    /// Sine coefficients `x₂..x_N` of the kernel-orthogonal part.
    pub coeffs: Vec<R>,
    /// Euclidean norm of the Galerkin residual at acceptance.
    pub residual: R,
}

/// The curve `A(ξ)` over a swept range.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCurve<R> {
    /// Points ordered by strictly increasing `ξ`.
    pub points: Vec<SolutionCurvePoint<R>>,
    pub xi_range: (R, R),
    pub step: R,
}

impl<R: Real> SolutionCurve<R> {
    /// Point with the smallest forcing amplitude.
    pub fn min_amplitude_index(&self) -> usize {
        let mut idx = 0;
        for (i, p) in self.points.iter().enumerate() {
            if p.amplitude < self.points[idx].amplitude {
                idx = i;
            }
        }
        idx
    }
}

/// Fold of the solution curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldReport<R> {
    /// Extremal forcing amplitude `A₀`.
    pub a0: R,
    pub xi_at_fold: R,
    /// Set when the curve is flat to round-off (degenerate linear case).
    pub flat: bool,
}

/// Continuation failures.
#[derive(Debug, Error)]
pub enum BvpError<R: Real> {
    #[error("Newton diverged at xi={xi} (residual {residual:e} after {iterations} iterations)")]
    NewtonDiverged {
        xi: f64,
        residual: f64,
        iterations: usize,
    },
    #[error("sweep stalled at xi={failed_at} after 6 local step halvings")]
    SweepIncomplete {
        partial: SolutionCurve<R>,
        failed_at: f64,
    },
    #[error("curve minimum sits on the sweep boundary at xi={xi}; widen the range")]
    FoldOnBoundary { xi: f64 },
}

/// Precomputed sine/cosine tables on the Simpson grid.
struct SineBasis<R> {
    h: R,
    /// `sin(k t_i)` for `k = 1..=modes` (outer index `k − 1`).
    sin_kt: Vec<Vec<R>>,
    /// `cos(k t_i)` likewise.
    cos_kt: Vec<Vec<R>>,
}

impl<R: Real> SineBasis<R> {
    fn new(modes: usize) -> Self {
        let points = 2 * SIMPSON_PANELS;
        let h = R::PI() / real_usize::<R>(points);
        let grid: Vec<R> = (0..=points).map(|i| real_usize::<R>(i) * h).collect();
        let mut sin_kt = Vec::with_capacity(modes);
        let mut cos_kt = Vec::with_capacity(modes);
        for k in 1..=modes {
            let kr = real_usize::<R>(k);
            sin_kt.push(grid.iter().map(|&t| (kr * t).sin()).collect());
            cos_kt.push(grid.iter().map(|&t| (kr * t).cos()).collect());
        }
        SineBasis { h, sin_kt, cos_kt }
    }

    fn grid_len(&self) -> usize {
        self.sin_kt[0].len()
    }
}

/// Galerkin residual with the linear part evaluated analytically and the
/// `F(x)'` term integrated by parts onto `k·∫ F(x) cos kt dt` (the boundary
/// terms vanish under the Dirichlet conditions).
fn residual_with_basis<R: Real>(
    dp: &DirichletProblem<R>,
    basis: &SineBasis<R>,
    xi: R,
    amplitude: R,
    coeffs: &[R],
) -> Vec<R> {
    let n = dp.modes;
    debug_assert_eq!(coeffs.len(), n - 1);
    let half_pi = R::FRAC_PI_2();

    // x(t) on the grid.
    let mut x = vec![R::zero(); basis.grid_len()];
    for (xi_val, table) in std::iter::once((xi, &basis.sin_kt[0]))
        .chain(coeffs.iter().enumerate().map(|(j, &c)| (c, &basis.sin_kt[j + 1])))
    {
        if xi_val != R::zero() {
            for (acc, &s) in x.iter_mut().zip(table) {
                *acc += xi_val * s;
            }
        }
    }
    let f_of_x: Vec<R> = x.iter().map(|&v| dp.nonlinearity.eval(v)).collect();

    let mut residual = Vec::with_capacity(n);
    let mut weighted = vec![R::zero(); basis.grid_len()];
    for k in 1..=n {
        let kr = real_usize::<R>(k);
        let c_k = if k == 1 { xi } else { coeffs[k - 2] };
        for (w, (&f, &ck)) in weighted.iter_mut().zip(f_of_x.iter().zip(&basis.cos_kt[k - 1])) {
            *w = f * ck;
        }
        let nonlinear = kr * simpson_uniform(&weighted, basis.h);
        let linear = half_pi * (R::one() - kr * kr) * c_k;
        let drive = half_pi * dp.forcing_coefficient(k, amplitude);
        residual.push(linear + nonlinear - drive);
    }
    residual
}

/// Galerkin residual of the truncated system at `(ξ, A, x₂..x_N)`.
///
/// Component `k` is `⟨x'' + x, sin kt⟩ + k·∫₀^π F(x) cos kt dt − ⟨e, sin kt⟩`.
pub fn galerkin_residual<R: Real>(
    dp: &DirichletProblem<R>,
    xi: R,
    amplitude: R,
    coeffs: &[R],
) -> Vec<R> {
    assert_eq!(
        coeffs.len(),
        dp.modes - 1,
        "need coefficients for modes 2..=N"
    );
    let basis = SineBasis::new(dp.modes);
    residual_with_basis(dp, &basis, xi, amplitude, coeffs)
}

fn solve_with_basis<R: Real>(
    dp: &DirichletProblem<R>,
    basis: &SineBasis<R>,
    xi: R,
    warm: Option<&SolutionCurvePoint<R>>,
) -> Result<SolutionCurvePoint<R>, BvpError<R>> {
    let n = dp.modes;
    let mut u0 = vec![R::zero(); n];
    if let Some(w) = warm {
        u0[0] = w.amplitude;
        u0[1..].copy_from_slice(&w.coeffs);
    }

    let opts = NewtonOptions {
        tol: real(POINT_RESIDUAL_GATE),
        max_iterations: 50,
        max_halvings: 30,
        fd_step: real(1e-7),
    };
    let outcome = damped_newton(
        |u: &[R]| -> Result<Vec<R>, std::convert::Infallible> {
            Ok(residual_with_basis(dp, basis, xi, u[0], &u[1..]))
        },
        &u0,
        &opts,
    );
    match outcome {
        Ok(result) => Ok(SolutionCurvePoint {
            xi,
            amplitude: result.solution[0],
            coeffs: result.solution[1..].to_vec(),
            residual: result.residual_norm,
        }),
        Err(NewtonError::Diverged {
            iterations,
            best_residual,
        }) => Err(BvpError::NewtonDiverged {
            xi: xi.to_f64().unwrap_or(f64::NAN),
            residual: best_residual,
            iterations,
        }),
        Err(NewtonError::SingularJacobian) => Err(BvpError::NewtonDiverged {
            xi: xi.to_f64().unwrap_or(f64::NAN),
            residual: f64::NAN,
            iterations: 0,
        }),
        Err(NewtonError::Eval(e)) => match e {},
    }
}

/// Solves the Galerkin system at a prescribed first harmonic `ξ`,
/// warm-starting from a nearby point when given.
pub fn solve_at_xi<R: Real>(
    dp: &DirichletProblem<R>,
    xi: R,
    warm: Option<&SolutionCurvePoint<R>>,
) -> Result<SolutionCurvePoint<R>, BvpError<R>> {
    let basis = SineBasis::new(dp.modes);
    solve_with_basis(dp, &basis, xi, warm)
}

/// Marches `ξ` across `[xi_lo, xi_hi]`, warm-starting each solve and halving
/// the step locally (up to 6 times) when Newton loses the curve.
pub fn sweep_curve<R: Real>(
    dp: &DirichletProblem<R>,
    xi_lo: R,
    xi_hi: R,
    step: R,
) -> Result<SolutionCurve<R>, BvpError<R>> {
    assert!(xi_lo < xi_hi, "need a nonempty xi range");
    assert!(step > R::zero(), "step must be positive");
    let basis = SineBasis::new(dp.modes);

    let mut points: Vec<SolutionCurvePoint<R>> = Vec::new();
    let first = solve_with_basis(dp, &basis, xi_lo, None)?;
    points.push(first);

    let tiny = step * real::<R>(1e-9);
    let mut xi = xi_lo;
    while xi < xi_hi - tiny {
        let mut target = (xi + step).min(xi_hi);
        let mut halvings = 0;
        loop {
            match solve_with_basis(dp, &basis, target, points.last()) {
                Ok(point) => {
                    points.push(point);
                    xi = target;
                    break;
                }
                Err(BvpError::NewtonDiverged { .. }) if halvings < 6 => {
                    halvings += 1;
                    target = xi + (target - xi) * real::<R>(0.5);
                }
                Err(_) => {
                    return Err(BvpError::SweepIncomplete {
                        partial: SolutionCurve {
                            points,
                            xi_range: (xi_lo, xi_hi),
                            step,
                        },
                        failed_at: target.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
    }

    Ok(SolutionCurve {
        points,
        xi_range: (xi_lo, xi_hi),
        step,
    })
}

/// Locates the fold `A₀ = min A(ξ)`, refining the grid minimum by
/// golden-section search to `10⁻⁶` in `ξ`.
pub fn find_fold<R: Real>(
    dp: &DirichletProblem<R>,
    curve: &SolutionCurve<R>,
) -> Result<FoldReport<R>, BvpError<R>> {
    assert!(!curve.points.is_empty(), "curve must be nonempty");
    let idx = curve.min_amplitude_index();
    let amplitudes: Vec<R> = curve.points.iter().map(|p| p.amplitude).collect();
    let spread = amplitudes
        .iter()
        .fold(R::neg_infinity(), |a, &b| a.max(b))
        - curve.points[idx].amplitude;
    if spread < real(1e-12) {
        return Ok(FoldReport {
            a0: curve.points[idx].amplitude,
            xi_at_fold: curve.points[idx].xi,
            flat: true,
        });
    }
    if idx == 0 || idx + 1 == curve.points.len() {
        return Err(BvpError::FoldOnBoundary {
            xi: curve.points[idx].xi.to_f64().unwrap_or(f64::NAN),
        });
    }

    let basis = SineBasis::new(dp.modes);
    let mut warm = curve.points[idx].clone();
    let eval = |xi: R, warm: &mut SolutionCurvePoint<R>| -> Result<R, BvpError<R>> {
        let point = solve_with_basis(dp, &basis, xi, Some(warm))?;
        let a = point.amplitude;
        *warm = point;
        Ok(a)
    };

    let inv_phi = real::<R>(0.618_033_988_749_894_9);
    let mut lo = curve.points[idx - 1].xi;
    let mut hi = curve.points[idx + 1].xi;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1, &mut warm)?;
    let mut f2 = eval(x2, &mut warm)?;
    let gate = real::<R>(1e-6);
    while hi - lo > gate {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1, &mut warm)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2, &mut warm)?;
        }
    }
    let (a0, xi_at_fold) = if f1 <= f2 { (f1, x1) } else { (f2, x2) };
    Ok(FoldReport {
        a0,
        xi_at_fold,
        flat: false,
    })
}

/// Counts solutions of the Dirichlet problem at forcing amplitude `a_query`
/// by counting confirmed crossings of `A(ξ) = a_query` along the curve.
pub fn count_solutions<R: Real>(
    dp: &DirichletProblem<R>,
    curve: &SolutionCurve<R>,
    a_query: R,
) -> Result<usize, BvpError<R>> {
    assert!(!curve.points.is_empty(), "curve must be nonempty");
    let basis = SineBasis::new(dp.modes);
    let gate = real::<R>(1e-6);
    let mut count = 0usize;
    for pair in curve.points.windows(2) {
        let g0 = pair[0].amplitude - a_query;
        let g1 = pair[1].amplitude - a_query;
        if !(g0 * g1 < R::zero()) {
            continue;
        }
        // Bisection on the bracketing interval confirms a genuine crossing.
        let mut lo = pair[0].xi;
        let mut hi = pair[1].xi;
        let mut g_lo = g0;
        let mut warm = pair[0].clone();
        while hi - lo > gate {
            let mid = (lo + hi) * real::<R>(0.5);
            let point = solve_with_basis(dp, &basis, mid, Some(&warm))?;
            let g_mid = point.amplitude - a_query;
            warm = point;
            if g_mid == R::zero() {
                break;
            }
            if (g_mid > R::zero()) == (g_lo > R::zero()) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        count += 1;
    }
    Ok(count)
}
