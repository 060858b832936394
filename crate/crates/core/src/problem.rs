//! The forced oscillator `x'' + f(x)x' + n²x = e(t)` and its three
//! equivalent first-order formulations.

use crate::forcing::ForcingTerm;
use crate::integrate::OdeError;
use crate::nonlinearity::SaturatingNonlinearity;
use crate::scalar::{real, real_usize, Real};

/// Radius below which the polar chart is rejected; integrate the Cartesian
/// form instead near the origin.
pub const POLAR_RADIUS_FLOOR: f64 = 1e-3;

/// State in the Liénard plane: `y = x' + F(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> PhaseState<R> {
    pub fn new(x: R, y: R) -> Self {
        PhaseState { x, y }
    }

    pub fn to_array(self) -> [R; 2] {
        [self.x, self.y]
    }

    pub fn from_array(s: [R; 2]) -> Self {
        PhaseState { x: s[0], y: s[1] }
    }

    /// Scaled-plane coordinates `(X, Y) = (n·x, y)`.
    pub fn to_scaled(self, n: u32) -> [R; 2] {
        [real_usize::<R>(n as usize) * self.x, self.y]
    }

    /// Inverse of [`PhaseState::to_scaled`].
    pub fn from_scaled(s: [R; 2], n: u32) -> Self {
        PhaseState {
            x: s[0] / real_usize::<R>(n as usize),
            y: s[1],
        }
    }
}

/// Polar state in the scaled plane. The angle is kept unwrapped (continuous,
/// not reduced mod 2π) so the large-radius law `θ ≈ −n t + φ` can be read off
/// directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarState<R> {
    pub r: R,
    pub theta: R,
}

impl<R: Real> PolarState<R> {
    pub fn new(r: R, theta: R) -> Self {
        PolarState { r, theta }
    }

    pub fn to_array(self) -> [R; 2] {
        [self.r, self.theta]
    }

    pub fn from_array(s: [R; 2]) -> Self {
        PolarState { r: s[0], theta: s[1] }
    }

    /// Cartesian scaled-plane coordinates `(r cos θ, r sin θ)`.
    pub fn to_cartesian(self) -> [R; 2] {
        [self.r * self.theta.cos(), self.r * self.theta.sin()]
    }
}

/// Resonantly forced oscillator `x'' + f(x)x' + n²x = e(t)` with integer
/// resonance order `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorProblem<R> {
    /// Resonance order of the linear part.
    pub n: u32,
    pub nonlinearity: SaturatingNonlinearity,
    pub forcing: ForcingTerm<R>,
}

impl<R: Real> OscillatorProblem<R> {
    pub fn new(n: u32, nonlinearity: SaturatingNonlinearity, forcing: ForcingTerm<R>) -> Self {
        assert!(n >= 1, "resonance order must be a positive integer");
        OscillatorProblem {
            n,
            nonlinearity,
            forcing,
        }
    }

    #[inline]
    pub fn n_real(&self) -> R {
        real_usize::<R>(self.n as usize)
    }

    /// Liénard vector field: `x' = −F(x) + y`, `y' = −n²x + e(t)`.
    pub fn lienard_rhs(&self, t: R, s: &PhaseState<R>) -> PhaseState<R> {
        let n = self.n_real();
        PhaseState {
            x: -self.nonlinearity.eval(s.x) + s.y,
            y: -n * n * s.x + self.forcing.eval(t),
        }
    }

    /// Scaled vector field in `(X, Y) = (n·x, y)`:
    /// `X' = −n F(X/n) + n Y`, `Y' = −n X + e(t)`.
    pub fn scaled_rhs(&self, t: R, s: &[R; 2]) -> [R; 2] {
        let n = self.n_real();
        [
            -n * self.nonlinearity.eval(s[0] / n) + n * s[1],
            -n * s[0] + self.forcing.eval(t),
        ]
    }

    /// Polar vector field in the scaled plane:
    /// `r' = −n F(r cos θ / n) cos θ + e(t) sin θ`,
    /// `θ' = −n + n F(r cos θ / n) sin θ / r + e(t) cos θ / r`.
    ///
    /// Rejects radii at or below [`POLAR_RADIUS_FLOOR`], where the chart
    /// degenerates.
    pub fn polar_rhs(&self, t: R, s: &PolarState<R>) -> Result<PolarState<R>, OdeError> {
        let floor = real::<R>(POLAR_RADIUS_FLOOR);
        if s.r <= floor {
            return Err(OdeError::RadiusTooSmall {
                t: t.to_f64().unwrap_or(f64::NAN),
                r: s.r.to_f64().unwrap_or(f64::NAN),
                floor: POLAR_RADIUS_FLOOR,
            });
        }
        let n = self.n_real();
        let (sin_th, cos_th) = s.theta.sin_cos();
        let f_val = self.nonlinearity.eval(s.r * cos_th / n);
        let e = self.forcing.eval(t);
        Ok(PolarState {
            r: -n * f_val * cos_th + e * sin_th,
            theta: -n + (n * f_val * sin_th + e * cos_th) / s.r,
        })
    }

    /// Liénard field adapted to the integrator's array signature.
    pub fn lienard_field(&self) -> impl Fn(R, &[R; 2]) -> Result<[R; 2], OdeError> + '_ {
        move |t, s| {
            let d = self.lienard_rhs(t, &PhaseState::from_array(*s));
            Ok(d.to_array())
        }
    }

    /// Scaled field adapted to the integrator's array signature.
    pub fn scaled_field(&self) -> impl Fn(R, &[R; 2]) -> Result<[R; 2], OdeError> + '_ {
        move |t, s| Ok(self.scaled_rhs(t, s))
    }

    /// Polar field adapted to the integrator's array signature.
    pub fn polar_field(&self) -> impl Fn(R, &[R; 2]) -> Result<[R; 2], OdeError> + '_ {
        move |t, s| {
            let d = self.polar_rhs(t, &PolarState::from_array(*s))?;
            Ok(d.to_array())
        }
    }
}
