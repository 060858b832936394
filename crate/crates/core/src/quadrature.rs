//! Quadrature rules used by the condition checkers and the Galerkin solver.
//!
//! Periodic integrands over a full period use the uniform trapezoid rule,
//! which is spectrally accurate there. Non-periodic integrands (Dirichlet
//! interval, partial antiderivatives) use composite Simpson.

use crate::scalar::{real_usize, Real};

/// Node count for periodic trapezoid integrals over `[0, 2π]`.
pub const PERIODIC_TRAPEZOID_NODES: usize = 1024;

/// Panel count for composite Simpson on `[0, π]` (1025 grid points).
pub const SIMPSON_PANELS: usize = 512;

/// Trapezoid rule for a periodic integrand over one full period.
///
/// Equivalent to the rectangle rule on the uniform grid `t_i = i·period/nodes`;
/// for smooth periodic `f` the error decays faster than any power of `1/nodes`.
pub fn trapezoid_periodic<R: Real>(f: impl Fn(R) -> R, period: R, nodes: usize) -> R {
    let h = period / real_usize::<R>(nodes);
    let mut acc = R::zero();
    for i in 0..nodes {
        acc += f(real_usize::<R>(i) * h);
    }
    acc * h
}

/// Trapezoid rule over uniformly sampled values (both endpoints included).
pub fn trapezoid_uniform<R: Real>(values: &[R], h: R) -> R {
    assert!(values.len() >= 2, "need at least two samples");
    let half = R::from_f64(0.5).unwrap();
    let mut acc = (values[0] + values[values.len() - 1]) * half;
    for v in &values[1..values.len() - 1] {
        acc += *v;
    }
    acc * h
}

/// Composite Simpson rule with `panels` parabolic panels (`2·panels + 1` nodes).
pub fn simpson<R: Real>(f: impl Fn(R) -> R, a: R, b: R, panels: usize) -> R {
    assert!(panels >= 1, "need at least one panel");
    let m = 2 * panels;
    let h = (b - a) / real_usize::<R>(m);
    let mut odd = R::zero();
    let mut even = R::zero();
    for i in 1..m {
        let t = a + real_usize::<R>(i) * h;
        if i % 2 == 1 {
            odd += f(t);
        } else {
            even += f(t);
        }
    }
    let four = real_usize::<R>(4);
    let two = real_usize::<R>(2);
    let three = real_usize::<R>(3);
    (f(a) + f(b) + four * odd + two * even) * h / three
}

/// Composite Simpson over uniformly sampled values; `values.len()` must be odd.
pub fn simpson_uniform<R: Real>(values: &[R], h: R) -> R {
    assert!(
        values.len() >= 3 && values.len() % 2 == 1,
        "Simpson needs an odd number of samples (≥ 3)"
    );
    let mut odd = R::zero();
    let mut even = R::zero();
    for (i, v) in values.iter().enumerate().skip(1).take(values.len() - 2) {
        if i % 2 == 1 {
            odd += *v;
        } else {
            even += *v;
        }
    }
    let four = real_usize::<R>(4);
    let two = real_usize::<R>(2);
    let three = real_usize::<R>(3);
    (values[0] + values[values.len() - 1] + four * odd + two * even) * h / three
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        // ∫₀¹ (t³ − 2t² + 3t − 1) dt = 1/4 − 2/3 + 3/2 − 1 = 1/12
        let value = simpson(|t: f64| t * t * t - 2.0 * t * t + 3.0 * t - 1.0, 0.0, 1.0, 4);
        assert!((value - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_trapezoid_is_spectrally_accurate() {
        // ∫₀²π exp(cos t) dt: 32 nodes already resolve the integrand to
        // round-off, so refining the grid changes nothing measurable.
        let tau = std::f64::consts::TAU;
        let reference = trapezoid_periodic(|t: f64| t.cos().exp(), tau, 256);
        let coarse = trapezoid_periodic(|t: f64| t.cos().exp(), tau, 32);
        assert!((coarse - reference).abs() < 1e-12);
    }

    #[test]
    fn uniform_rules_match_closures() {
        let n = 64;
        let h = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|i| (i as f64 * h).sin()).collect();
        let direct = simpson(|t: f64| t.sin(), 0.0, 1.0, n / 2);
        assert!((simpson_uniform(&samples, h) - direct).abs() < 1e-15);
        let trapz = trapezoid_uniform(&samples, h);
        assert!((trapz - (1.0 - 1.0_f64.cos())).abs() < 1e-4);
    }
}
