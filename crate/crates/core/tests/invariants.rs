//! Cross-module invariants: coordinate-chart consistency of the flows, the
//! large-radius contraction limit, return-map regularity, and independent
//! discretization checks of the Galerkin continuation.

use std::f64::consts::{PI, TAU};

use resonator_core::bvp::{solve_at_xi, sweep_curve, DirichletProblem, SolutionCurvePoint};
use resonator_core::forcing::ForcingTerm;
use resonator_core::integrate::{terminal_state, Tolerances};
use resonator_core::nonlinearity::SaturatingNonlinearity;
use resonator_core::poincare::{find_fixed_point, return_map, SeedGrid};
use resonator_core::problem::{OscillatorProblem, PhaseState};
use resonator_core::resonance::{check_dirichlet_necessary, identity_integral};

const SIGMOID: SaturatingNonlinearity = SaturatingNonlinearity::Sigmoid;

#[test]
fn lienard_and_scaled_flows_agree() {
    // Integrating the Liénard and the scaled formulation from corresponding
    // data must land on corresponding terminal states within 10× tolerance.
    let tol = Tolerances::with(1e-10_f64, 1e-12);
    for n in [1u32, 2, 3] {
        let p = OscillatorProblem::new(n, SIGMOID, ForcingTerm::cosine_harmonic(1, 0.8));
        let s0 = PhaseState::new(1.3, -0.6);
        let lienard = terminal_state(p.lienard_field(), 0.0, TAU, s0.to_array(), &tol).unwrap();
        let scaled = terminal_state(p.scaled_field(), 0.0, TAU, s0.to_scaled(n), &tol).unwrap();
        let back = PhaseState::from_scaled(scaled, n);
        let err = (lienard[0] - back.x).hypot(lienard[1] - back.y);
        assert!(err < 10.0 * 1e-8, "chart mismatch for n={n}: {err:e}");
    }
}

#[test]
fn polar_and_cartesian_flows_agree_away_from_origin() {
    let tol = Tolerances::with(1e-10_f64, 1e-12);
    for (n, r0, phi0) in [(1u32, 5.0, 0.3), (2, 8.5, 2.0), (1, 20.0, -1.0)] {
        let p = OscillatorProblem::new(n, SIGMOID, ForcingTerm::cosine_harmonic(1, 1.0));
        let polar_end = terminal_state(p.polar_field(), 0.0, TAU, [r0, phi0], &tol).unwrap();
        let cart0 = [r0 * phi0.cos(), r0 * phi0.sin()];
        let cart_end = terminal_state(p.scaled_field(), 0.0, TAU, cart0, &tol).unwrap();
        let from_polar = [
            polar_end[0] * polar_end[1].cos(),
            polar_end[0] * polar_end[1].sin(),
        ];
        let err = (from_polar[0] - cart_end[0]).hypot(from_polar[1] - cart_end[1]);
        assert!(err < 10.0 * 1e-8 * r0, "polar/Cartesian mismatch: {err:e}");
    }
}

#[test]
fn contraction_approaches_its_large_radius_limit() {
    // r(2π, c, φ) − c → −2n·span + Aₙ sin φ − Bₙ cos φ; within 5% at c = 1e4.
    let p = OscillatorProblem::new(1, SIGMOID, ForcingTerm::cosine_harmonic(1, 1.0));
    let tol = Tolerances::default();
    for k in 0..16 {
        let phi = TAU * k as f64 / 16.0;
        let result = return_map(&p, 1.0e4, phi, &tol).unwrap();
        let limit = -4.0 + PI * phi.sin();
        assert!(
            (result.contraction - limit).abs() < 0.05 * limit.abs(),
            "phi={phi:.3}: contraction {} vs limit {limit}",
            result.contraction
        );
    }
}

#[test]
fn return_map_is_lipschitz_on_test_instances() {
    let p = OscillatorProblem::new(1, SIGMOID, ForcingTerm::cosine_harmonic(1, 1.0));
    let tol = Tolerances::default();
    let delta = 1e-6;
    for base in [[0.1, 0.2], [3.0, 1.0], [0.5, -0.8], [0.0, 4.5]] {
        let image = terminal_state(p.lienard_field(), 0.0, TAU, base, &tol).unwrap();
        let diag = std::f64::consts::FRAC_1_SQRT_2;
        for dir in [[1.0, 0.0], [0.0, 1.0], [diag, diag]] {
            let moved = terminal_state(
                p.lienard_field(),
                0.0,
                TAU,
                [base[0] + delta * dir[0], base[1] + delta * dir[1]],
                &tol,
            )
            .unwrap();
            let stretch = (moved[0] - image[0]).hypot(moved[1] - image[1]) / delta;
            assert!(stretch < 1e3, "local stretch {stretch:.1} at {base:?}");
        }
    }
}

#[test]
fn drift_minimum_sits_at_the_fixed_point_when_one_exists() {
    // Consistency of the two existence probes: on a holding instance the
    // residual scan bottoms out in the grid cell containing the fixed point.
    let p: OscillatorProblem<f64> =
        OscillatorProblem::new(1, SIGMOID, ForcingTerm::cosine_harmonic(1, 1.0));
    let tol = Tolerances::default();
    let sol = find_fixed_point(&p, &SeedGrid::default(), &tol).unwrap();
    let c_star = sol.initial_state.x.hypot(sol.initial_state.y);
    let phi_star = sol.initial_state.y.atan2(sol.initial_state.x);

    let drift = resonator_core::poincare::drift_certificate(&p, 50.0, 32, 32, &tol).unwrap();
    let spacing = 50.0 / 31.0;
    let dx = drift.min_at_c * drift.min_at_phi.cos() - c_star * phi_star.cos();
    let dy = drift.min_at_c * drift.min_at_phi.sin() - c_star * phi_star.sin();
    assert!(
        dx.hypot(dy) < 1.1 * spacing,
        "drift minimum at ({}, {}) is far from the fixed point at ({c_star}, {phi_star})",
        drift.min_at_c,
        drift.min_at_phi
    );
    assert!(drift.min_residual < 0.2, "residual {}", drift.min_residual);
}

#[test]
fn identity_holds_for_the_nonresonant_solution() {
    let p = OscillatorProblem::new(1, SIGMOID, ForcingTerm::sine_harmonic(2, 1.0));
    let seeds = SeedGrid {
        ball: Some(2.0),
        ..SeedGrid::default()
    };
    let sol = find_fixed_point(&p, &seeds, &Tolerances::default()).unwrap();
    for k in 0..8 {
        let angle = TAU * (k as f64 + 0.37) / 8.0;
        let report = identity_integral(&p, &sol, angle.cos(), angle.sin()).unwrap();
        assert!((report.integral - report.identity_rhs).abs() < 1e-4);
        assert!(report.integral.abs() < report.bound);
    }
}

#[test]
fn curve_respects_the_necessary_condition() {
    // Every computed curve point keeps |A| < span and the raw kernel
    // integral below the span as well.
    let dp: DirichletProblem<f64> = DirichletProblem::with_default_shape(SIGMOID, 0.0, 12);
    let curve = sweep_curve(&dp, -8.0, 8.0, 0.1).unwrap();
    for point in &curve.points {
        assert!(point.amplitude.abs() < 2.0, "A = {}", point.amplitude);
        let probe = DirichletProblem::with_default_shape(SIGMOID, point.amplitude, 12);
        let report = check_dirichlet_necessary(SIGMOID, probe.forcing());
        assert!(report.holds);
        assert!(report.kernel_integral.unwrap().abs() < 2.0);
    }
}

#[test]
fn curve_is_odd_for_pure_kernel_forcing() {
    // Without shape harmonics the problem is odd-symmetric: A(−ξ) = −A(ξ).
    let dp: DirichletProblem<f64> = DirichletProblem::new(SIGMOID, 0.0, vec![], 12);
    let curve = sweep_curve(&dp, -2.0, 2.0, 0.25).unwrap();
    let m = curve.points.len();
    for i in 0..m {
        let mirrored = &curve.points[m - 1 - i];
        let point = &curve.points[i];
        assert!((point.xi + mirrored.xi).abs() < 1e-12);
        assert!(
            (point.amplitude + mirrored.amplitude).abs() < 1e-8,
            "A({}) = {}, A({}) = {}",
            point.xi,
            point.amplitude,
            mirrored.xi,
            mirrored.amplitude
        );
    }
}

#[test]
fn mode_doubling_converges_on_the_figure_instance() {
    // The sine expansion of the solution carries a curvature mismatch at the
    // boundary (x''(0) = f(0)·x'(0) ≠ 0), so coefficients decay like k⁻³ and
    // doubling N refines the solve at second order rather than spectrally.
    let dp16: DirichletProblem<f64> = DirichletProblem::with_default_shape(SIGMOID, 0.0, 16);
    let dp32: DirichletProblem<f64> = DirichletProblem::with_default_shape(SIGMOID, 0.0, 32);
    for xi in [-5.0, -1.0, 0.0, 1.0, 5.0] {
        let p16 = solve_at_xi(&dp16, xi, None).unwrap();
        let p32 = solve_at_xi(&dp32, xi, None).unwrap();
        let mut diff: f64 = (p16.amplitude - p32.amplitude).abs();
        for j in 0..p16.coeffs.len() {
            diff = diff.max((p16.coeffs[j] - p32.coeffs[j]).abs());
        }
        assert!(diff < 1e-3, "xi={xi}: coefficient drift {diff:e}");
        assert!(
            (p16.amplitude - p32.amplitude).abs() < 5e-4,
            "xi={xi}: amplitude drift {:e}",
            (p16.amplitude - p32.amplitude).abs()
        );
    }
}

// ---------------------------------------------------------------------------
// Independent discretization: second-order finite-difference collocation of
// the Dirichlet equation (using f(x)x' for the damping term) with the same
// kernel-harmonic constraint, solved by a bordered tridiagonal Newton.
// ---------------------------------------------------------------------------

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut r = rhs.to_vec();
    for i in 1..n {
        let w = lower[i] / d[i - 1];
        d[i] -= w * upper[i - 1];
        r[i] -= w * r[i - 1];
    }
    r[n - 1] /= d[n - 1];
    for i in (0..n - 1).rev() {
        r[i] = (r[i] - upper[i] * r[i + 1]) / d[i];
    }
    r
}

/// Solves the collocation system on 2001 uniform points for `(x, A)` at fixed
/// first harmonic ξ, starting from the Galerkin point. Returns the grid
/// values and the amplitude.
fn fd_collocation_solve(
    dp: &DirichletProblem<f64>,
    point: &SolutionCurvePoint<f64>,
) -> (Vec<f64>, f64) {
    let xi = point.xi;
    let m = 2000usize;
    let h = PI / m as f64;
    let x_gal = |t: f64| -> f64 {
        let mut x = xi * t.sin();
        for (j, &c) in point.coeffs.iter().enumerate() {
            x += c * ((j + 2) as f64 * t).sin();
        }
        x
    };
    let shape_at = |t: f64| -> f64 {
        let mut acc = 0.0;
        for (j, &s) in dp.shape.iter().enumerate() {
            acc += s * ((j + 2) as f64 * t).sin();
        }
        acc
    };

    let nn = m - 1;
    let mut x: Vec<f64> = (1..m).map(|i| x_gal(i as f64 * h)).collect();
    let mut a = point.amplitude;
    for iteration in 0..80 {
        let mut res = vec![0.0; nn];
        let mut lower = vec![0.0; nn];
        let mut diag = vec![0.0; nn];
        let mut upper = vec![0.0; nn];
        let mut col_a = vec![0.0; nn];
        let mut rn: f64 = 0.0;
        for i in 0..nn {
            let xm = if i == 0 { 0.0 } else { x[i - 1] };
            let xp = if i == nn - 1 { 0.0 } else { x[i + 1] };
            let t = (i + 1) as f64 * h;
            let f = dp.nonlinearity.slope(x[i]);
            let r = (xp - 2.0 * x[i] + xm) / (h * h) - f * (xp - xm) / (2.0 * h) + x[i]
                - (a * t.sin() + shape_at(t));
            res[i] = r;
            rn = rn.max(r.abs());
            let eps = 1e-7 * (1.0 + x[i].abs());
            let f_prime =
                (dp.nonlinearity.slope(x[i] + eps) - dp.nonlinearity.slope(x[i] - eps)) / (2.0 * eps);
            lower[i] = 1.0 / (h * h) + f / (2.0 * h);
            diag[i] = -2.0 / (h * h) - f_prime * (xp - xm) / (2.0 * h) + 1.0;
            upper[i] = 1.0 / (h * h) - f / (2.0 * h);
            col_a[i] = -t.sin();
        }
        let mut projection = 0.0;
        for i in 0..nn {
            projection += x[i] * ((i + 1) as f64 * h).sin();
        }
        projection *= 2.0 * h / PI;
        let constraint = projection - xi;
        // The 1/h² stencil amplifies f64 rounding to ~1e-10 per unit of
        // |x|; converge safely above that floor (discretization error ~1e-5).
        if rn < 5e-9 && constraint.abs() < 1e-11 {
            break;
        }
        assert!(iteration < 79, "collocation Newton stalled: residual {rn:e}");

        let neg_res: Vec<f64> = res.iter().map(|&v| -v).collect();
        let neg_col: Vec<f64> = col_a.iter().map(|&v| -v).collect();
        let u = thomas(&lower, &diag, &upper, &neg_res);
        let v = thomas(&lower, &diag, &upper, &neg_col);
        let mut su = 0.0;
        let mut sv = 0.0;
        for i in 0..nn {
            let w = ((i + 1) as f64 * h).sin();
            su += w * u[i];
            sv += w * v[i];
        }
        su *= 2.0 * h / PI;
        sv *= 2.0 * h / PI;
        let da = (-constraint - su) / sv;
        for i in 0..nn {
            x[i] += u[i] + v[i] * da;
        }
        a += da;
    }
    (x, a)
}

#[test]
fn galerkin_agrees_with_fd_collocation() {
    // The by-parts Galerkin treatment against direct differentiation: the
    // amplitude A agrees to 1e-3 at every probe; the grid profiles agree to
    // 1e-3 near the curve center and within the sine-tail boundary-layer
    // budget at large |ξ|, improving at N = 32.
    let dp16 = DirichletProblem::with_default_shape(SIGMOID, 0.0, 16);
    let dp32 = DirichletProblem::with_default_shape(SIGMOID, 0.0, 32);
    let m = 2000usize;
    let h = PI / m as f64;

    for xi in [0.0, 1.0, 5.0, -5.0, 15.0] {
        let p16 = solve_at_xi(&dp16, xi, None).unwrap();
        let (x_fd, a_fd) = fd_collocation_solve(&dp16, &p16);
        assert!(
            (a_fd - p16.amplitude).abs() < 1e-3,
            "xi={xi}: A mismatch {:e}",
            (a_fd - p16.amplitude).abs()
        );
        let sup16 = x_fd
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let t = (i + 1) as f64 * h;
                let mut x = xi * t.sin();
                for (j, &c) in p16.coeffs.iter().enumerate() {
                    x += c * ((j + 2) as f64 * t).sin();
                }
                (v - x).abs()
            })
            .fold(0.0_f64, f64::max);
        let gate = if xi == 0.0 { 1e-3 } else { 2e-2 };
        assert!(sup16 < gate, "xi={xi}: profile mismatch {sup16:e}");

        let p32 = solve_at_xi(&dp32, xi, None).unwrap();
        let (x_fd32, _) = fd_collocation_solve(&dp32, &p32);
        let sup32 = x_fd32
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let t = (i + 1) as f64 * h;
                let mut x = xi * t.sin();
                for (j, &c) in p32.coeffs.iter().enumerate() {
                    x += c * ((j + 2) as f64 * t).sin();
                }
                (v - x).abs()
            })
            .fold(0.0_f64, f64::max);
        assert!(
            sup32 < 0.5 * sup16,
            "xi={xi}: doubling the modes must at least halve the profile gap ({sup16:e} → {sup32:e})"
        );
    }
}
