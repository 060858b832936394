//! Periodic solutions of resonantly forced oscillators with saturating
//! damping.
//!
//! The crate studies `x'' + f(x)x' + n²x = e(t)` with 2π-periodic forcing,
//! where the damping primitive `F = ∫f` has finite limits at `±∞`:
//!
//! - [`resonance`] checks the sharp existence condition comparing the order-`n`
//!   harmonic content of the forcing against the saturation span, and the
//!   necessary condition for the companion Dirichlet problem;
//! - [`poincare`] realizes the existence argument constructively — the time-2π
//!   return map, its invariant ball, fixed points (periodic solutions), and
//!   drift certificates when no solution exists;
//! - [`bvp`] traces the Dirichlet solution curve `A(ξ)` by sine-Galerkin
//!   continuation and locates its fold, showing that the necessary condition
//!   is not sufficient for that problem.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pin double precision.

pub mod bvp;
pub mod forcing;
pub mod integrate;
pub mod linalg;
pub mod newton;
pub mod nonlinearity;
pub mod poincare;
pub mod problem;
pub mod quadrature;
pub mod resonance;
pub mod scalar;

pub use bvp::{DirichletProblem, FoldReport, SolutionCurve, SolutionCurvePoint};
pub use forcing::ForcingTerm;
pub use integrate::{integrate, integrate_at, OdeError, Tolerances, Trajectory};
pub use nonlinearity::SaturatingNonlinearity;
pub use poincare::{
    DriftReport, InvariantBallReport, PeriodicSolution, PeriodicityReport, ReturnMapResult,
    SeedGrid,
};
pub use problem::{OscillatorProblem, PhaseState, PolarState};
pub use resonance::{ConditionReport, Harmonic, IdentityReport};
pub use scalar::Real;

/// Double-precision aliases for the main entry types.
pub type OscillatorProblem64 = OscillatorProblem<f64>;
pub type DirichletProblem64 = DirichletProblem<f64>;
pub type ForcingTerm64 = ForcingTerm<f64>;
pub type Tolerances64 = Tolerances<f64>;
pub type SolutionCurve64 = SolutionCurve<f64>;
pub type ConditionReport64 = ConditionReport<f64>;

/// Single-precision aliases.
pub type OscillatorProblem32 = OscillatorProblem<f32>;
pub type ForcingTerm32 = ForcingTerm<f32>;
pub type Tolerances32 = Tolerances<f32>;
