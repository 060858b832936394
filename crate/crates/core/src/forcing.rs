//! Periodic forcing represented as a finite Fourier series.

use crate::quadrature::{trapezoid_periodic, PERIODIC_TRAPEZOID_NODES};
use crate::scalar::{real_usize, Real};

/// `2π`-periodic forcing `e(t) = a₀ + Σₖ aₖ cos kt + bₖ sin kt`.
///
/// Restricting to trigonometric polynomials keeps the harmonic projections
/// exact and the configuration serializable.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingTerm<R> {
    /// Constant term `a₀`.
    pub constant: R,
    /// Cosine coefficients `a₁..a_K` (index 0 is the first harmonic).
    pub cosine: Vec<R>,
    /// Sine coefficients `b₁..b_K`.
    pub sine: Vec<R>,
}

impl<R: Real> ForcingTerm<R> {
    /// Zero forcing.
    pub fn zero() -> Self {
        ForcingTerm {
            constant: R::zero(),
            cosine: Vec::new(),
            sine: Vec::new(),
        }
    }

    /// Single cosine harmonic `amplitude · cos(k t)`, `k ≥ 1`.
    pub fn cosine_harmonic(k: usize, amplitude: R) -> Self {
        assert!(k >= 1, "harmonic index must be ≥ 1");
        let mut cosine = vec![R::zero(); k];
        cosine[k - 1] = amplitude;
        ForcingTerm {
            constant: R::zero(),
            cosine,
            sine: Vec::new(),
        }
    }

    /// Single sine harmonic `amplitude · sin(k t)`, `k ≥ 1`.
    pub fn sine_harmonic(k: usize, amplitude: R) -> Self {
        assert!(k >= 1, "harmonic index must be ≥ 1");
        let mut sine = vec![R::zero(); k];
        sine[k - 1] = amplitude;
        ForcingTerm {
            constant: R::zero(),
            cosine: Vec::new(),
            sine,
        }
    }

    /// Evaluates the series at time `t`.
    pub fn eval(&self, t: R) -> R {
        let mut acc = self.constant;
        for (i, &a) in self.cosine.iter().enumerate() {
            if a != R::zero() {
                acc += a * (real_usize::<R>(i + 1) * t).cos();
            }
        }
        for (i, &b) in self.sine.iter().enumerate() {
            if b != R::zero() {
                acc += b * (real_usize::<R>(i + 1) * t).sin();
            }
        }
        acc
    }

    /// Harmonic projections `(∫₀²π e cos nt dt, ∫₀²π e sin nt dt)`, evaluated
    /// analytically from the coefficients: `(π·aₙ, π·bₙ)`.
    pub fn fourier_coefficient(&self, n: usize) -> (R, R) {
        assert!(n >= 1, "projection order must be ≥ 1");
        let a = self.cosine.get(n - 1).copied().unwrap_or_else(R::zero);
        let b = self.sine.get(n - 1).copied().unwrap_or_else(R::zero);
        (R::PI() * a, R::PI() * b)
    }

    /// Same projections computed by periodic trapezoid quadrature; validation
    /// path for [`ForcingTerm::fourier_coefficient`].
    pub fn fourier_coefficient_quadrature(&self, n: usize, nodes: usize) -> (R, R) {
        assert!(n >= 1, "projection order must be ≥ 1");
        let nr = real_usize::<R>(n);
        let tau = R::TAU();
        let a = trapezoid_periodic(|t| self.eval(t) * (nr * t).cos(), tau, nodes);
        let b = trapezoid_periodic(|t| self.eval(t) * (nr * t).sin(), tau, nodes);
        (a, b)
    }

    /// Returns the forcing scaled by `factor`.
    pub fn scaled(&self, factor: R) -> Self {
        ForcingTerm {
            constant: self.constant * factor,
            cosine: self.cosine.iter().map(|&a| a * factor).collect(),
            sine: self.sine.iter().map(|&b| b * factor).collect(),
        }
    }

    /// Largest harmonic index carried by the series.
    pub fn max_harmonic(&self) -> usize {
        self.cosine.len().max(self.sine.len())
    }

    /// Uniform bound `|e(t)| ≤ |a₀| + Σ|aₖ| + Σ|bₖ|`.
    pub fn amplitude_bound(&self) -> R {
        let mut acc = self.constant.abs();
        for &a in &self.cosine {
            acc += a.abs();
        }
        for &b in &self.sine {
            acc += b.abs();
        }
        acc
    }
}

/// Convenience wrapper using the default node count.
pub fn fourier_coefficient_quadrature_default<R: Real>(
    forcing: &ForcingTerm<R>,
    n: usize,
) -> (R, R) {
    forcing.fourier_coefficient_quadrature(n, PERIODIC_TRAPEZOID_NODES)
}
