//! JSON problem configuration: schema, validation, and resolution of
//! defaults so that dumped configs re-parse identically.

use serde::{Deserialize, Serialize};

use resonator_core::{
    DirichletProblem64, ForcingTerm64, OscillatorProblem64, SaturatingNonlinearity, Tolerances64,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Periodic,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityTag {
    Sigmoid,
    AtanScaled,
    Tanh,
}

impl NonlinearityTag {
    pub fn to_core(self) -> SaturatingNonlinearity {
        match self {
            NonlinearityTag::Sigmoid => SaturatingNonlinearity::Sigmoid,
            NonlinearityTag::AtanScaled => SaturatingNonlinearity::AtanScaled,
            NonlinearityTag::Tanh => SaturatingNonlinearity::Tanh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cosine: Vec<f64>,
    #[serde(default)]
    pub sine: Vec<f64>,
}

impl ForcingConfig {
    fn zero() -> Self {
        ForcingConfig {
            constant: 0.0,
            cosine: Vec::new(),
            sine: Vec::new(),
        }
    }

    pub fn to_core(&self) -> ForcingTerm64 {
        ForcingTerm64 {
            constant: self.constant,
            cosine: self.cosine.clone(),
            sine: self.sine.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    /// Relative local-error tolerance of the integrator (default 1e-8).
    pub rel: f64,
    /// Absolute local-error tolerance (default 1e-10).
    pub abs: f64,
    /// Residual gate for accepting a return-map fixed point (default 1e-9).
    pub fixed_point: f64,
}

impl Default for TolerancesConfig {
    fn default() -> Self {
        TolerancesConfig {
            rel: 1e-8,
            abs: 1e-10,
            fixed_point: 1e-9,
        }
    }
}

impl TolerancesConfig {
    pub fn to_core(self) -> Tolerances64 {
        Tolerances64 {
            rel: self.rel,
            abs: self.abs,
            fixed_point: self.fixed_point,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedGridConfig {
    /// Seed radii (default 5); the origin is always tried first.
    pub radii: usize,
    /// Seed angles per radius (default 8).
    pub angles: usize,
    /// Ball radius to seed inside; omitted → derived from the invariant ball.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<f64>,
}

impl Default for SeedGridConfig {
    fn default() -> Self {
        SeedGridConfig {
            radii: 5,
            angles: 8,
            ball: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Continuation range in the first-harmonic amplitude (default [-20, 20]).
    pub xi_lo: f64,
    pub xi_hi: f64,
    /// Continuation step (default 0.05).
    pub step: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            xi_lo: -20.0,
            xi_hi: 20.0,
            step: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReturnMapConfig {
    /// Initial radius in the scaled plane (default 10).
    pub c: f64,
    /// Initial angle (default 0).
    pub phi: f64,
}

impl Default for ReturnMapConfig {
    fn default() -> Self {
        ReturnMapConfig { c: 10.0, phi: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftConfig {
    /// Ball radius scanned by the drift certificate (default 50).
    pub radius: f64,
    /// Radial grid points (default 32).
    pub grid_c: usize,
    /// Angular grid points (default 32).
    pub grid_phi: usize,
}

impl Default for DriftConfig {
    fn default() -> Self {
        DriftConfig {
            radius: 50.0,
            grid_c: 32,
            grid_phi: 32,
        }
    }
}

/// Problem configuration. Mode-specific sections are optional on input and
/// filled with documented defaults by [`ProblemConfig::resolve`]; fields that
/// do not belong to the active mode are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub schema_version: u32,
    pub mode: Mode,
    pub nonlinearity: NonlinearityTag,
    /// Resonance order (periodic mode only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Fourier forcing (periodic mode only; defaults to zero forcing).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<ForcingConfig>,
    /// Kernel forcing amplitude A (dirichlet mode only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Forcing shape beyond the kernel: coefficient j scales sin((j+2)t)
    /// (dirichlet mode only; default [1.0]).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<f64>>,
    /// Galerkin truncation order (dirichlet mode only; default 16).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_grid: Option<SeedGridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_map: Option<ReturnMapConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftConfig>,
    /// Amplitude queried by the `count` subcommand (dirichlet mode only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_amplitude: Option<f64>,
}

/// Validation failure with a user-facing message.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

impl ProblemConfig {
    /// Validates mode-specific fields and fills every default, producing a
    /// config that serializes to the exact form it re-parses from.
    pub fn resolve(mut self) -> Result<ProblemConfig, ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match self.mode {
            Mode::Periodic => {
                let n = self
                    .n
                    .ok_or_else(|| err("periodic mode requires the resonance order `n`"))?;
                if n < 1 {
                    return Err(err("resonance order `n` must be ≥ 1"));
                }
                for (name, present) in [
                    ("amplitude", self.amplitude.is_some()),
                    ("shape", self.shape.is_some()),
                    ("modes", self.modes.is_some()),
                    ("sweep", self.sweep.is_some()),
                    ("count_amplitude", self.count_amplitude.is_some()),
                ] {
                    if present {
                        return Err(err(format!("`{name}` is only valid in dirichlet mode")));
                    }
                }
                self.forcing.get_or_insert_with(ForcingConfig::zero);
                self.seed_grid.get_or_insert_with(SeedGridConfig::default);
                self.return_map.get_or_insert_with(ReturnMapConfig::default);
                self.drift.get_or_insert_with(DriftConfig::default);
            }
            Mode::Dirichlet => {
                if self.amplitude.is_none() {
                    return Err(err("dirichlet mode requires the forcing `amplitude`"));
                }
                for (name, present) in [
                    ("n", self.n.is_some()),
                    ("forcing", self.forcing.is_some()),
                    ("seed_grid", self.seed_grid.is_some()),
                    ("return_map", self.return_map.is_some()),
                    ("drift", self.drift.is_some()),
                ] {
                    if present {
                        return Err(err(format!("`{name}` is only valid in periodic mode")));
                    }
                }
                let shape = self.shape.get_or_insert_with(|| vec![1.0]);
                let modes = *self.modes.get_or_insert(16);
                if modes < 2 {
                    return Err(err("`modes` must be ≥ 2"));
                }
                if shape.len() + 1 > modes {
                    return Err(err(format!(
                        "forcing shape carries harmonics beyond the truncation: {} coefficients need modes ≥ {}",
                        shape.len(),
                        shape.len() + 1
                    )));
                }
                self.sweep.get_or_insert_with(SweepConfig::default);
                let sweep = self.sweep.as_ref().unwrap();
                if !(sweep.xi_lo < sweep.xi_hi) || !(sweep.step > 0.0) {
                    return Err(err("sweep requires xi_lo < xi_hi and step > 0"));
                }
            }
        }
        self.tolerances.get_or_insert_with(TolerancesConfig::default);
        let tol = self.tolerances.as_ref().unwrap();
        if !(tol.rel > 0.0 && tol.abs > 0.0 && tol.fixed_point > 0.0) {
            return Err(err("tolerances must be positive"));
        }
        Ok(self)
    }

    pub fn tolerances(&self) -> Tolerances64 {
        self.tolerances.unwrap_or_default().to_core()
    }

    /// Builds the periodic-mode problem (call after [`ProblemConfig::resolve`]).
    pub fn oscillator(&self) -> Result<OscillatorProblem64, ConfigError> {
        if self.mode != Mode::Periodic {
            return Err(err("this subcommand needs a periodic-mode config"));
        }
        Ok(OscillatorProblem64::new(
            self.n.expect("resolved config"),
            self.nonlinearity.to_core(),
            self.forcing.as_ref().expect("resolved config").to_core(),
        ))
    }

    /// Builds the Dirichlet-mode problem (call after [`ProblemConfig::resolve`]).
    pub fn dirichlet(&self) -> Result<DirichletProblem64, ConfigError> {
        if self.mode != Mode::Dirichlet {
            return Err(err("this subcommand needs a dirichlet-mode config"));
        }
        Ok(DirichletProblem64::new(
            self.nonlinearity.to_core(),
            self.amplitude.expect("resolved config"),
            self.shape.clone().expect("resolved config"),
            self.modes.expect("resolved config"),
        ))
    }
}
