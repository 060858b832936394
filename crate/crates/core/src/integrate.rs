//! Embedded Runge–Kutta 5(4) integrator with PI step-size control and
//! quintic dense output (Dormand–Prince coefficients, FSAL).

use thiserror::Error;

use crate::scalar::{real, real_usize, Real};

/// Local-error tolerances plus the fixed-point residual gate used by the
/// return-map solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<R> {
    /// Relative local-error tolerance.
    pub rel: R,
    /// Absolute local-error tolerance.
    pub abs: R,
    /// Residual gate for accepting a return-map fixed point.
    pub fixed_point: R,
}

impl<R: Real> Default for Tolerances<R> {
    fn default() -> Self {
        Tolerances {
            rel: real(1e-8),
            abs: real(1e-10),
            fixed_point: real(1e-9),
        }
    }
}

impl<R: Real> Tolerances<R> {
    /// Tight tolerances for oracle re-integrations.
    pub fn oracle() -> Self {
        Tolerances {
            rel: real(1e-10),
            abs: real(1e-12),
            fixed_point: real(1e-9),
        }
    }

    /// Builds tolerances with the default fixed-point gate.
    pub fn with(rel: R, abs: R) -> Self {
        Tolerances {
            rel,
            abs,
            fixed_point: real(1e-9),
        }
    }
}

/// Integration failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    /// The polar chart degenerates near the origin; the caller must switch to
    /// Cartesian coordinates below the floor radius.
    #[error("polar radius {r:e} at t={t} is at or below the floor {floor:e}; use Cartesian coordinates near the origin")]
    RadiusTooSmall { t: f64, r: f64, floor: f64 },
    /// The controller drove the step size below the resolvable limit.
    #[error("step size underflow at t={t} (h={h:e}); dynamics too stiff or singular for the 5(4) pair")]
    StepSizeUnderflow { t: f64, h: f64 },
}

/// Time-ordered record of an integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<R, const N: usize> {
    /// Strictly increasing sample times.
    pub times: Vec<R>,
    /// State at each sample time.
    pub states: Vec<[R; N]>,
    /// Number of accepted steps.
    pub accepted_steps: usize,
    /// Number of rejected attempts.
    pub rejected_steps: usize,
}

impl<R: Real, const N: usize> Trajectory<R, N> {
    /// State at the final sample time.
    pub fn last_state(&self) -> [R; N] {
        *self.states.last().expect("trajectory is never empty")
    }

    /// Component `i` of every sample.
    pub fn component(&self, i: usize) -> Vec<R> {
        self.states.iter().map(|s| s[i]).collect()
    }
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;

#[inline]
fn axpy<R: Real, const N: usize>(y: &[R; N], terms: &[(R, &[R; N])], h: R) -> [R; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = R::zero();
        for (c, k) in terms {
            acc += *c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Quintic dense-output coefficients for one accepted step.
struct DenseSegment<R, const N: usize> {
    t0: R,
    h: R,
    cont: [[R; N]; 5],
}

impl<R: Real, const N: usize> DenseSegment<R, N> {
    fn eval(&self, t: R) -> [R; N] {
        let s = (t - self.t0) / self.h;
        let s1 = R::one() - s;
        let mut out = [R::zero(); N];
        for i in 0..N {
            out[i] = self.cont[0][i]
                + s * (self.cont[1][i]
                    + s1 * (self.cont[2][i]
                        + s * (self.cont[3][i] + s1 * self.cont[4][i])));
        }
        out
    }
}

struct Dopri5<'a, R, const N: usize, F> {
    f: F,
    tol: &'a Tolerances<R>,
    t: R,
    y: [R; N],
    k1: [R; N],
    h: R,
    t_end: R,
    err_old: R,
    accepted: usize,
    rejected: usize,
}

enum StepOutcome {
    Accepted,
    Rejected,
}

impl<'a, R, const N: usize, F> Dopri5<'a, R, N, F>
where
    R: Real,
    F: FnMut(R, &[R; N]) -> Result<[R; N], OdeError>,
{
    fn new(mut f: F, t0: R, t_end: R, y0: [R; N], tol: &'a Tolerances<R>) -> Result<Self, OdeError> {
        let k1 = f(t0, &y0)?;
        let mut solver = Dopri5 {
            f,
            tol,
            t: t0,
            y: y0,
            k1,
            h: R::zero(),
            t_end,
            err_old: real(1e-4),
            accepted: 0,
            rejected: 0,
        };
        solver.h = solver.initial_step()?;
        Ok(solver)
    }

    /// Hairer's starting-step heuristic.
    fn initial_step(&mut self) -> Result<R, OdeError> {
        let span = self.t_end - self.t;
        let mut d0 = R::zero();
        let mut d1 = R::zero();
        for i in 0..N {
            let sk = self.tol.abs + self.tol.rel * self.y[i].abs();
            d0 += (self.y[i] / sk).powi(2);
            d1 += (self.k1[i] / sk).powi(2);
        }
        let nr = real_usize::<R>(N);
        d0 = (d0 / nr).sqrt();
        d1 = (d1 / nr).sqrt();
        let small = real(1e-10);
        let mut h0 = if d0 < small || d1 < small {
            real(1e-6)
        } else {
            real::<R>(0.01) * d0 / d1
        };
        h0 = h0.min(span);

        let y1 = axpy(&self.y, &[(R::one(), &self.k1)], h0);
        let f1 = (self.f)(self.t + h0, &y1)?;
        let mut d2 = R::zero();
        for i in 0..N {
            let sk = self.tol.abs + self.tol.rel * self.y[i].abs();
            d2 += ((f1[i] - self.k1[i]) / sk).powi(2);
        }
        d2 = (d2 / nr).sqrt() / h0;

        let dmax = d1.max(d2);
        let h1 = if dmax <= real(1e-15) {
            (h0 * real(1e-3)).max(real(1e-6))
        } else {
            (real::<R>(0.01) / dmax).powf(real(0.2))
        };
        Ok((h0 * real(100.0)).min(h1).min(span))
    }

    /// Attempts one step; on acceptance fills `segment` with dense output.
    fn try_step(&mut self, segment: &mut Option<DenseSegment<R, N>>) -> Result<StepOutcome, OdeError> {
        let floor = R::epsilon() * real::<R>(16.0) * self.t.abs().max(R::one());
        if self.h <= floor {
            return Err(OdeError::StepSizeUnderflow {
                t: self.t.to_f64().unwrap_or(f64::NAN),
                h: self.h.to_f64().unwrap_or(f64::NAN),
            });
        }

        let t = self.t;
        let h = self.h;
        let y = self.y;
        let k1 = self.k1;

        let y2 = axpy(&y, &[(real(A21), &k1)], h);
        let k2 = (self.f)(t + real::<R>(C2) * h, &y2)?;
        let y3 = axpy(&y, &[(real(A31), &k1), (real(A32), &k2)], h);
        let k3 = (self.f)(t + real::<R>(C3) * h, &y3)?;
        let y4 = axpy(&y, &[(real(A41), &k1), (real(A42), &k2), (real(A43), &k3)], h);
        let k4 = (self.f)(t + real::<R>(C4) * h, &y4)?;
        let y5 = axpy(
            &y,
            &[(real(A51), &k1), (real(A52), &k2), (real(A53), &k3), (real(A54), &k4)],
            h,
        );
        let k5 = (self.f)(t + real::<R>(C5) * h, &y5)?;
        let y6 = axpy(
            &y,
            &[
                (real(A61), &k1),
                (real(A62), &k2),
                (real(A63), &k3),
                (real(A64), &k4),
                (real(A65), &k5),
            ],
            h,
        );
        let k6 = (self.f)(t + h, &y6)?;
        let y_new = axpy(
            &y,
            &[(real(B1), &k1), (real(B3), &k3), (real(B4), &k4), (real(B5), &k5), (real(B6), &k6)],
            h,
        );
        let k7 = (self.f)(t + h, &y_new)?;

        let mut err = R::zero();
        for i in 0..N {
            let sk = self.tol.abs + self.tol.rel * y[i].abs().max(y_new[i].abs());
            let e = h
                * (real::<R>(E1) * k1[i]
                    + real::<R>(E3) * k3[i]
                    + real::<R>(E4) * k4[i]
                    + real::<R>(E5) * k5[i]
                    + real::<R>(E6) * k6[i]
                    + real::<R>(E7) * k7[i]);
            err += (e / sk).powi(2);
        }
        err = (err / real_usize::<R>(N)).sqrt();
        if !err.is_finite() {
            // NaN in the error estimate: treat as a hard rejection.
            self.rejected += 1;
            self.h *= real(0.25);
            return Ok(StepOutcome::Rejected);
        }

        // PI controller (error exponent 1/5 with a small integral term).
        let expo = real::<R>(0.2 - BETA * 0.75);
        let fac11 = err.powf(expo);
        let fac = fac11 / self.err_old.powf(real(BETA));
        let fac = real::<R>(1.0 / FAC_MAX).max(real::<R>(1.0 / FAC_MIN).min(fac / real(SAFETY)));

        if err <= R::one() {
            // Dense output for the interval just covered.
            let mut cont = [[R::zero(); N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h
                    * (real::<R>(D1) * k1[i]
                        + real::<R>(D3) * k3[i]
                        + real::<R>(D4) * k4[i]
                        + real::<R>(D5) * k5[i]
                        + real::<R>(D6) * k6[i]
                        + real::<R>(D7) * k7[i]);
            }
            *segment = Some(DenseSegment { t0: t, h, cont });

            self.err_old = err.max(real(1e-4));
            self.accepted += 1;
            self.t = t + h;
            self.y = y_new;
            self.k1 = k7;
            self.h = h / fac;
        } else {
            self.rejected += 1;
            self.h = h / (real::<R>(1.0 / FAC_MIN).min(fac11 / real(SAFETY)));
            return Ok(StepOutcome::Rejected);
        }
        Ok(StepOutcome::Accepted)
    }
}

fn integrate_impl<R, const N: usize, F>(
    f: F,
    t0: R,
    t1: R,
    y0: [R; N],
    tol: &Tolerances<R>,
    samples: Option<&[R]>,
) -> Result<Trajectory<R, N>, OdeError>
where
    R: Real,
    F: FnMut(R, &[R; N]) -> Result<[R; N], OdeError>,
{
    assert!(t1 > t0, "integration interval must be forward in time");
    assert!(
        tol.rel > R::zero() && tol.abs > R::zero(),
        "tolerances must be positive"
    );
    if let Some(ts) = samples {
        assert!(
            ts.windows(2).all(|w| w[1] > w[0]),
            "sample times must be strictly increasing"
        );
        if let (Some(&first), Some(&last)) = (ts.first(), ts.last()) {
            assert!(first >= t0 && last <= t1, "sample times must lie in [t0, t1]");
        }
    }

    let mut solver = Dopri5::new(f, t0, t1, y0, tol)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut next_sample = 0usize;

    match samples {
        Some(ts) => {
            while next_sample < ts.len() && ts[next_sample] <= t0 {
                times.push(ts[next_sample]);
                states.push(y0);
                next_sample += 1;
            }
        }
        None => {
            times.push(t0);
            states.push(y0);
        }
    }

    let mut steps = 0usize;
    let endpoint_slack = R::epsilon() * real::<R>(32.0) * t1.abs().max(R::one());
    while solver.t < t1 {
        if t1 - solver.t <= endpoint_slack {
            // Remaining interval is at round-off scale; the state is terminal.
            solver.t = t1;
            break;
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(OdeError::StepSizeUnderflow {
                t: solver.t.to_f64().unwrap_or(f64::NAN),
                h: solver.h.to_f64().unwrap_or(f64::NAN),
            });
        }
        let clamped = solver.t + solver.h >= t1;
        if clamped {
            solver.h = t1 - solver.t;
        }
        let mut segment = None;
        match solver.try_step(&mut segment)? {
            StepOutcome::Rejected => continue,
            StepOutcome::Accepted => {}
        }
        if clamped {
            // t + (t1 − t) can round one ulp away from t1; pin the endpoint.
            solver.t = t1;
        }
        match samples {
            Some(ts) => {
                let segment = segment.expect("accepted step produces dense output");
                while next_sample < ts.len() && ts[next_sample] <= solver.t {
                    times.push(ts[next_sample]);
                    states.push(segment.eval(ts[next_sample]));
                    next_sample += 1;
                }
            }
            None => {
                times.push(solver.t);
                states.push(solver.y);
            }
        }
    }

    // Exact terminal state for samples that coincide with t1 up to round-off.
    if let Some(ts) = samples {
        while next_sample < ts.len() {
            times.push(ts[next_sample]);
            states.push(solver.y);
            next_sample += 1;
        }
        if let Some(last) = states.last_mut() {
            if *times.last().unwrap() == t1 {
                *last = solver.y;
            }
        }
    } else if let Some(&last_t) = times.last() {
        if last_t < t1 {
            times.push(t1);
            states.push(solver.y);
        }
    }

    Ok(Trajectory {
        times,
        states,
        accepted_steps: solver.accepted,
        rejected_steps: solver.rejected,
    })
}

/// Integrates `y' = f(t, y)` from `t0` to `t1`, recording every accepted step.
///
/// The trajectory starts exactly at `t0` and ends exactly at `t1`.
pub fn integrate<R, const N: usize, F>(
    f: F,
    t0: R,
    t1: R,
    y0: [R; N],
    tol: &Tolerances<R>,
) -> Result<Trajectory<R, N>, OdeError>
where
    R: Real,
    F: FnMut(R, &[R; N]) -> Result<[R; N], OdeError>,
{
    integrate_impl(f, t0, t1, y0, tol, None)
}

/// Integrates and records the dense-output state at the requested times only.
///
/// `times` must be strictly increasing and contained in `[t0, t1]`.
pub fn integrate_at<R, const N: usize, F>(
    f: F,
    t0: R,
    t1: R,
    y0: [R; N],
    tol: &Tolerances<R>,
    times: &[R],
) -> Result<Trajectory<R, N>, OdeError>
where
    R: Real,
    F: FnMut(R, &[R; N]) -> Result<[R; N], OdeError>,
{
    integrate_impl(f, t0, t1, y0, tol, Some(times))
}

/// Terminal state only.
pub fn terminal_state<R, const N: usize, F>(
    f: F,
    t0: R,
    t1: R,
    y0: [R; N],
    tol: &Tolerances<R>,
) -> Result<[R; N], OdeError>
where
    R: Real,
    F: FnMut(R, &[R; N]) -> Result<[R; N], OdeError>,
{
    // Skip per-step recording; keep only counters and the running state.
    let mut solver = Dopri5::new(f, t0, t1, y0, tol)?;
    let mut steps = 0usize;
    let endpoint_slack = R::epsilon() * real::<R>(32.0) * t1.abs().max(R::one());
    while solver.t < t1 {
        if t1 - solver.t <= endpoint_slack {
            break;
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(OdeError::StepSizeUnderflow {
                t: solver.t.to_f64().unwrap_or(f64::NAN),
                h: solver.h.to_f64().unwrap_or(f64::NAN),
            });
        }
        let clamped = solver.t + solver.h >= t1;
        if clamped {
            solver.h = t1 - solver.t;
        }
        let mut segment = None;
        if let StepOutcome::Accepted = solver.try_step(&mut segment)? {
            if clamped {
                solver.t = t1;
            }
        }
    }
    Ok(solver.y)
}

/// Uniform grid of `count + 1` points spanning `[a, b]` inclusive.
pub fn linspace<R: Real>(a: R, b: R, count: usize) -> Vec<R> {
    assert!(count >= 1);
    let h = (b - a) / real_usize::<R>(count);
    let mut out: Vec<R> = (0..=count).map(|i| a + real_usize::<R>(i) * h).collect();
    out[count] = b;
    out
}
