//! Sharp existence condition for the periodic problem, the necessary
//! condition for the Dirichlet problem, and the clipped-harmonic and
//! harmonic-balance integrals behind them.

use thiserror::Error;

use crate::poincare::PeriodicSolution;
use crate::problem::OscillatorProblem;
use crate::nonlinearity::SaturatingNonlinearity;
use crate::quadrature::{simpson, trapezoid_uniform, SIMPSON_PANELS};
use crate::scalar::{real, real_usize, Real};

/// Outcome of an existence-condition check. `holds ⇔ lhs < rhs ⇔ margin > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport<R> {
    /// Forcing side of the inequality.
    pub lhs: R,
    /// Saturation side of the inequality.
    pub rhs: R,
    pub holds: bool,
    /// `rhs − lhs`.
    pub margin: R,
    /// For the Dirichlet check only: the raw kernel integral `∫₀^π e sin t dt`.
    /// It differs from `lhs` by the factor `π/2` (the kernel normalization);
    /// `lhs` uses the first-harmonic-coefficient convention.
    pub kernel_integral: Option<R>,
}

impl<R: Real> ConditionReport<R> {
    fn from_sides(lhs: R, rhs: R, kernel_integral: Option<R>) -> Self {
        ConditionReport {
            lhs,
            rhs,
            holds: lhs < rhs,
            margin: rhs - lhs,
            kernel_integral,
        }
    }
}

/// Checks the sharp condition for 2π-periodic solutions:
/// `√(Aₙ² + Bₙ²) < 2n·(F(∞) − F(−∞))` with `Aₙ, Bₙ` the order-`n`
/// harmonic projections of the forcing.
pub fn check_periodic_condition<R: Real>(p: &OscillatorProblem<R>) -> ConditionReport<R> {
    let (a_n, b_n) = p.forcing.fourier_coefficient(p.n as usize);
    let lhs = a_n.hypot(b_n);
    let rhs = real::<R>(2.0) * p.n_real() * p.nonlinearity.span::<R>();
    ConditionReport::from_sides(lhs, rhs, None)
}

/// Checks the necessary condition for the Dirichlet problem on `[0, π]`.
///
/// `forcing` is evaluated pointwise on `[0, π]`. The report's `lhs` is the
/// first-harmonic coefficient `|（2/π)·∫₀^π e sin t dt|` compared against
/// `F(∞) − F(−∞)`; the raw integral is kept in `kernel_integral`.
pub fn check_dirichlet_necessary<R: Real>(
    nonlinearity: SaturatingNonlinearity,
    forcing: impl Fn(R) -> R,
) -> ConditionReport<R> {
    let integral = simpson(|t: R| forcing(t) * t.sin(), R::zero(), R::PI(), SIMPSON_PANELS);
    let coefficient = real::<R>(2.0) * R::FRAC_1_PI() * integral;
    let rhs = nonlinearity.span::<R>();
    ConditionReport::from_sides(coefficient.abs(), rhs, Some(integral))
}

/// Which shifted harmonic to clip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Harmonic {
    Cosine,
    Sine,
}

impl Harmonic {
    #[inline]
    fn eval<R: Real>(self, n: R, phi: R, t: R) -> R {
        match self {
            Harmonic::Cosine => (n * t - phi).cos(),
            Harmonic::Sine => (n * t - phi).sin(),
        }
    }
}

/// Numerically integrates the positive part of `cos(nt − φ)` (or `sin`) over
/// `(0, 2π)`: the value is 2 for every `n ≥ 1` and every phase.
pub fn positive_part_integral<R: Real>(n: u32, phi: R, harmonic: Harmonic) -> R {
    clipped_harmonic_integral(n, phi, harmonic, true)
}

/// Negative-part counterpart; the value is −2.
pub fn negative_part_integral<R: Real>(n: u32, phi: R, harmonic: Harmonic) -> R {
    clipped_harmonic_integral(n, phi, harmonic, false)
}

/// Total node budget for one clipped-harmonic integral.
const CLIPPED_NODES: usize = 4096;

fn clipped_harmonic_integral<R: Real>(
    n: u32,
    phi: R,
    harmonic: Harmonic,
    positive: bool,
) -> R {
    assert!(n >= 1, "harmonic order must be ≥ 1");
    let nr = real_usize::<R>(n as usize);
    let tau = R::TAU();

    // Zeros of the shifted harmonic: the sign is constant between them, so
    // each subinterval is integrated with Simpson on a smooth integrand.
    // cos(nt − φ) = 0 at t = (φ + π/2 + kπ)/n, sin at t = (φ + kπ)/n.
    let offset = match harmonic {
        Harmonic::Cosine => phi + R::FRAC_PI_2(),
        Harmonic::Sine => phi,
    };
    let mut cuts: Vec<R> = Vec::new();
    let k_lo = ((-offset) / R::PI()).floor().to_f64().unwrap() as i64 - 1;
    let k_hi = ((tau * nr - offset) / R::PI()).ceil().to_f64().unwrap() as i64 + 1;
    for k in k_lo..=k_hi {
        let t = (offset + real::<R>(k as f64) * R::PI()) / nr;
        if t > R::zero() && t < tau {
            cuts.push(t);
        }
    }
    cuts.push(R::zero());
    cuts.push(tau);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < real(1e-14));

    let half = real::<R>(0.5);
    let mut total = R::zero();
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = (lo + hi) * half;
        let sign = harmonic.eval(nr, phi, mid);
        let wanted = if positive { sign > R::zero() } else { sign < R::zero() };
        if !wanted {
            continue;
        }
        let length = hi - lo;
        let panels = ((length / tau).to_f64().unwrap() * CLIPPED_NODES as f64 / 2.0).ceil() as usize;
        let panels = panels.max(8);
        total += simpson(|t| harmonic.eval(nr, phi, t), lo, hi, panels);
    }
    total
}

/// Errors of the harmonic-balance identity check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResonanceError {
    #[error("direction (a, b) must be nonzero")]
    ZeroDirection,
}

/// Result of evaluating the harmonic-balance identity on a periodic solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport<R> {
    /// `I = n·∫₀²π F(x(t))·sin(nt − δ) dt` computed from the solution samples.
    pub integral: R,
    /// `(a·Aₙ + b·Bₙ)/√(a² + b²)`.
    pub identity_rhs: R,
    /// `2n·(F(∞) − F(−∞))`; any true periodic solution keeps `|I|` below it.
    pub bound: R,
}

/// Evaluates the identity that every 2π-periodic solution must satisfy in the
/// direction `(a, b)`, with `δ` the phase of that direction.
pub fn identity_integral<R: Real>(
    p: &OscillatorProblem<R>,
    sol: &PeriodicSolution<R>,
    a: R,
    b: R,
) -> Result<IdentityReport<R>, ResonanceError> {
    if a == R::zero() && b == R::zero() {
        return Err(ResonanceError::ZeroDirection);
    }
    let rho = a.hypot(b);
    let delta = b.atan2(a);
    let n = p.n_real();

    let times = &sol.samples.times;
    let values: Vec<R> = times
        .iter()
        .zip(&sol.samples.states)
        .map(|(&t, s)| p.nonlinearity.eval(s[0]) * (n * t - delta).sin())
        .collect();
    let h = times[1] - times[0];
    let integral = n * trapezoid_uniform(&values, h);

    let (a_n, b_n) = p.forcing.fourier_coefficient(p.n as usize);
    let identity_rhs = (a * a_n + b * b_n) / rho;
    let bound = real::<R>(2.0) * n * p.nonlinearity.span::<R>();
    Ok(IdentityReport {
        integral,
        identity_rhs,
        bound,
    })
}
