//! Command-line front end: parses JSON problem configurations, dispatches to
//! the solver library, and emits machine-readable reports plus CSV/plot
//! artifacts.
//!
//! Exit codes: 0 success, 2 configuration/validation error, 3 solver failure.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{Mode, ProblemConfig};
use resonator_core::bvp::{count_solutions, find_fold, sweep_curve};
use resonator_core::poincare::{
    drift_certificate, find_fixed_point, return_map, verify_periodicity, SeedGrid,
};
use resonator_core::resonance::{
    check_dirichlet_necessary, check_periodic_condition, identity_integral,
};
use resonator_core::{PeriodicSolution, SolutionCurve64};

#[derive(Parser)]
#[command(
    name = "resonator",
    version,
    about = "Periodic solutions of resonantly forced oscillators: existence checks, return-map solving, and Dirichlet solution curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON problem configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory for CSV and plot artifacts.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the relative integrator tolerance (absolute follows as rel/100).
    #[arg(long, value_name = "REAL")]
    tol: Option<f64>,
    /// Override the fixed-point seed grid as RADIIxANGLES, e.g. 5x8.
    #[arg(long, value_name = "RxS")]
    seed_grid: Option<String>,
    /// Override the continuation range as LO:HI, e.g. -20:20.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
    xi_range: Option<String>,
    /// Override the continuation step.
    #[arg(long, value_name = "REAL")]
    xi_step: Option<f64>,
    /// Override the Galerkin truncation order.
    #[arg(long, value_name = "N")]
    modes: Option<usize>,
    /// Print the fully resolved configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the sharp periodic-existence condition or the Dirichlet
    /// necessary condition.
    Check(CommonArgs),
    /// Find a 2π-periodic solution as a fixed point of the return map.
    Periodic(CommonArgs),
    /// Evaluate the time-2π return map at the configured (c, phi).
    ReturnMap(CommonArgs),
    /// Scan the return-map residual over a ball (nonexistence evidence).
    Drift(CommonArgs),
    /// Sweep the Dirichlet solution curve A(xi).
    Curve(CommonArgs),
    /// Locate the fold of the solution curve.
    Fold(CommonArgs),
    /// Count Dirichlet solutions at a forcing amplitude.
    Count {
        #[command(flatten)]
        args: CommonArgs,
        /// Amplitude to query (falls back to `count_amplitude` in the config).
        #[arg(allow_negative_numbers = true)]
        amplitude: Option<f64>,
    },
    /// Recompute a periodic solution and verify it at oracle tolerance.
    Verify(CommonArgs),
}

enum CliError {
    /// Bad configuration or usage (exit 2).
    Validation(String),
    /// A solver reported failure (exit 3); the value is the JSON report.
    Solver(serde_json::Value),
}

impl CliError {
    fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }

    fn solver(kind: &str, e: impl std::fmt::Display) -> Self {
        CliError::Solver(json!({ "error": { "kind": kind, "message": e.to_string() } }))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, amplitude) = match &cli.command {
        Command::Check(a)
        | Command::Periodic(a)
        | Command::ReturnMap(a)
        | Command::Drift(a)
        | Command::Curve(a)
        | Command::Fold(a)
        | Command::Verify(a) => (a, None),
        Command::Count { args, amplitude } => (args, *amplitude),
    };

    match run(&cli.command, args, amplitude) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::SUCCESS
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Solver(report)) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::from(3)
        }
    }
}

fn load_config(args: &CommonArgs) -> Result<ProblemConfig, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg: ProblemConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid config: {e}")))?;

    if let Some(tol) = args.tol {
        let mut tolerances = cfg.tolerances.unwrap_or_default();
        tolerances.rel = tol;
        tolerances.abs = tol / 100.0;
        cfg.tolerances = Some(tolerances);
    }
    if let Some(spec) = &args.seed_grid {
        let (radii, angles) = spec
            .split_once(['x', 'X'])
            .and_then(|(r, s)| Some((r.parse().ok()?, s.parse().ok()?)))
            .ok_or_else(|| CliError::Validation(format!("--seed-grid expects RxS, got {spec:?}")))?;
        let mut grid = cfg.seed_grid.unwrap_or_default();
        grid.radii = radii;
        grid.angles = angles;
        cfg.seed_grid = Some(grid);
    }
    if let Some(spec) = &args.xi_range {
        let (lo, hi) = spec
            .split_once(':')
            .and_then(|(lo, hi)| Some((lo.parse().ok()?, hi.parse().ok()?)))
            .ok_or_else(|| CliError::Validation(format!("--xi-range expects LO:HI, got {spec:?}")))?;
        let mut sweep = cfg.sweep.unwrap_or_default();
        sweep.xi_lo = lo;
        sweep.xi_hi = hi;
        cfg.sweep = Some(sweep);
    }
    if let Some(step) = args.xi_step {
        let mut sweep = cfg.sweep.unwrap_or_default();
        sweep.step = step;
        cfg.sweep = Some(sweep);
    }
    if let Some(modes) = args.modes {
        cfg.modes = Some(modes);
    }

    cfg.resolve().map_err(CliError::validation)
}

fn run(
    command: &Command,
    args: &CommonArgs,
    count_amplitude: Option<f64>,
) -> Result<serde_json::Value, CliError> {
    let cfg = load_config(args)?;
    if args.dump_config {
        return Ok(serde_json::to_value(&cfg).unwrap());
    }
    match command {
        Command::Check(_) => cmd_check(&cfg),
        Command::Periodic(_) => cmd_periodic(&cfg, args.out.as_deref()),
        Command::ReturnMap(_) => cmd_return_map(&cfg),
        Command::Drift(_) => cmd_drift(&cfg),
        Command::Curve(_) => cmd_curve(&cfg, args.out.as_deref()),
        Command::Fold(_) => cmd_fold(&cfg),
        Command::Count { .. } => cmd_count(&cfg, count_amplitude),
        Command::Verify(_) => cmd_verify(&cfg),
    }
}

fn cmd_check(cfg: &ProblemConfig) -> Result<serde_json::Value, CliError> {
    match cfg.mode {
        Mode::Periodic => {
            let problem = cfg.oscillator().map_err(CliError::validation)?;
            let report = check_periodic_condition(&problem);
            Ok(json!({
                "mode": "periodic",
                "lhs": report.lhs,
                "rhs": report.rhs,
                "holds": report.holds,
                "margin": report.margin,
            }))
        }
        Mode::Dirichlet => {
            let problem = cfg.dirichlet().map_err(CliError::validation)?;
            let report = check_dirichlet_necessary(problem.nonlinearity, problem.forcing());
            Ok(json!({
                "mode": "dirichlet",
                "lhs": report.lhs,
                "rhs": report.rhs,
                "holds": report.holds,
                "margin": report.margin,
                "kernel_integral": report.kernel_integral,
            }))
        }
    }
}

fn seed_grid_from(cfg: &ProblemConfig) -> SeedGrid<f64> {
    let grid = cfg.seed_grid.unwrap_or_default();
    SeedGrid {
        radii: grid.radii,
        angles: grid.angles,
        ball: grid.ball,
    }
}

fn solve_periodic(cfg: &ProblemConfig) -> Result<PeriodicSolution<f64>, CliError> {
    let problem = cfg.oscillator().map_err(CliError::validation)?;
    find_fixed_point(&problem, &seed_grid_from(cfg), &cfg.tolerances())
        .map_err(|e| CliError::solver("no_fixed_point", e))
}

fn cmd_periodic(cfg: &ProblemConfig, out: Option<&Path>) -> Result<serde_json::Value, CliError> {
    let problem = cfg.oscillator().map_err(CliError::validation)?;
    let solution = solve_periodic(cfg)?;
    let check = verify_periodicity(&solution, &problem)
        .map_err(|e| CliError::solver("verification", e))?;
    let mut report = json!({
        "initial_state": { "x": solution.initial_state.x, "y": solution.initial_state.y },
        "residual": solution.residual,
        "first_harmonics": { "cos": solution.first_harmonics.0, "sin": solution.first_harmonics.1 },
        "verification": { "gap": check.gap, "max_ode_residual": check.max_ode_residual },
        "condition": cmd_check(cfg)?,
    });
    if let Some(dir) = out {
        let path = write_trajectory_csv(dir, &problem, &solution)?;
        report["artifacts"] = json!({ "trajectory_csv": path });
    }
    Ok(report)
}

fn cmd_return_map(cfg: &ProblemConfig) -> Result<serde_json::Value, CliError> {
    let problem = cfg.oscillator().map_err(CliError::validation)?;
    let rm = cfg.return_map.unwrap_or_default();
    if rm.c <= 0.0 {
        return Err(CliError::Validation("return_map.c must be positive".into()));
    }
    let result = return_map(&problem, rm.c, rm.phi, &cfg.tolerances())
        .map_err(|e| CliError::solver("integration", e))?;
    Ok(json!({
        "r_in": result.r_in,
        "phi_in": result.phi_in,
        "r_out": result.r_out,
        "theta_out": result.theta_out,
        "contraction": result.contraction,
    }))
}

fn cmd_drift(cfg: &ProblemConfig) -> Result<serde_json::Value, CliError> {
    let problem = cfg.oscillator().map_err(CliError::validation)?;
    let drift = cfg.drift.unwrap_or_default();
    let report = drift_certificate(
        &problem,
        drift.radius,
        drift.grid_c,
        drift.grid_phi,
        &cfg.tolerances(),
    )
    .map_err(|e| CliError::solver("integration", e))?;
    Ok(json!({
        "radius": drift.radius,
        "grid_c": drift.grid_c,
        "grid_phi": drift.grid_phi,
        "min_residual": report.min_residual,
        "min_at_c": report.min_at_c,
        "min_at_phi": report.min_at_phi,
        "max_iterated_radius": report.max_iterated_radius,
    }))
}

fn sweep_from_config(cfg: &ProblemConfig) -> Result<SolutionCurve64, CliError> {
    let problem = cfg.dirichlet().map_err(CliError::validation)?;
    let sweep = cfg.sweep.unwrap_or_default();
    sweep_curve(&problem, sweep.xi_lo, sweep.xi_hi, sweep.step)
        .map_err(|e| CliError::solver("sweep", e))
}

fn cmd_curve(cfg: &ProblemConfig, out: Option<&Path>) -> Result<serde_json::Value, CliError> {
    let curve = sweep_from_config(cfg)?;
    let min_idx = curve.min_amplitude_index();
    let a_max = curve
        .points
        .iter()
        .map(|p| p.amplitude)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut report = json!({
        "points": curve.points.len(),
        "xi_lo": curve.xi_range.0,
        "xi_hi": curve.xi_range.1,
        "step": curve.step,
        "a_min": curve.points[min_idx].amplitude,
        "a_min_at_xi": curve.points[min_idx].xi,
        "a_max": a_max,
    });
    if let Some(dir) = out {
        let modes = cfg.modes.expect("resolved config");
        let csv = write_curve_csv(dir, &curve, modes)?;
        let plot = write_curve_plot(dir)?;
        report["artifacts"] = json!({ "curve_csv": csv, "plot_script": plot });
    }
    Ok(report)
}

fn cmd_fold(cfg: &ProblemConfig) -> Result<serde_json::Value, CliError> {
    let problem = cfg.dirichlet().map_err(CliError::validation)?;
    let curve = sweep_from_config(cfg)?;
    let fold = find_fold(&problem, &curve).map_err(|e| CliError::solver("fold", e))?;
    // The solution count is reported at both distinguished amplitudes.
    let count_at_a0 =
        count_solutions(&problem, &curve, fold.a0).map_err(|e| CliError::solver("count", e))?;
    let count_at_zero =
        count_solutions(&problem, &curve, 0.0).map_err(|e| CliError::solver("count", e))?;
    Ok(json!({
        "a0": fold.a0,
        "xi_at_fold": fold.xi_at_fold,
        "flat": fold.flat,
        "count_at_a0": count_at_a0,
        "count_at_zero": count_at_zero,
    }))
}

fn cmd_count(cfg: &ProblemConfig, arg: Option<f64>) -> Result<serde_json::Value, CliError> {
    let problem = cfg.dirichlet().map_err(CliError::validation)?;
    let a_query = arg.or(cfg.count_amplitude).ok_or_else(|| {
        CliError::Validation(
            "count needs an amplitude: pass it as an argument or set `count_amplitude`".into(),
        )
    })?;
    let curve = sweep_from_config(cfg)?;
    let count =
        count_solutions(&problem, &curve, a_query).map_err(|e| CliError::solver("count", e))?;
    Ok(json!({ "a_query": a_query, "count": count }))
}

fn cmd_verify(cfg: &ProblemConfig) -> Result<serde_json::Value, CliError> {
    let problem = cfg.oscillator().map_err(CliError::validation)?;
    let solution = solve_periodic(cfg)?;
    let check = verify_periodicity(&solution, &problem)
        .map_err(|e| CliError::solver("verification", e))?;
    let identity = identity_integral(&problem, &solution, 1.0, 0.0)
        .map_err(|e| CliError::solver("identity", e))?;
    Ok(json!({
        "initial_state": { "x": solution.initial_state.x, "y": solution.initial_state.y },
        "residual": solution.residual,
        "gap": check.gap,
        "max_ode_residual": check.max_ode_residual,
        "identity": {
            "integral": identity.integral,
            "rhs": identity.identity_rhs,
            "bound": identity.bound,
        },
    }))
}

/// 17-significant-digit float formatting for byte-stable CSV output.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", dir.display())))
}

fn write_trajectory_csv(
    dir: &Path,
    problem: &resonator_core::OscillatorProblem64,
    solution: &PeriodicSolution<f64>,
) -> Result<String, CliError> {
    ensure_dir(dir)?;
    let path = dir.join("trajectory.csv");
    let mut text = String::from("t,x,xp,y\n");
    for (t, s) in solution.samples.times.iter().zip(&solution.samples.states) {
        let xp = s[1] - problem.nonlinearity.eval(s[0]);
        text.push_str(&format!("{},{},{},{}\n", fmt(*t), fmt(s[0]), fmt(xp), fmt(s[1])));
    }
    fs::write(&path, text)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn write_curve_csv(dir: &Path, curve: &SolutionCurve64, modes: usize) -> Result<String, CliError> {
    ensure_dir(dir)?;
    let path = dir.join("curve.csv");
    let mut header = String::from("xi,A,residual");
    for k in 2..=modes {
        header.push_str(&format!(",x{k}"));
    }
    header.push('\n');
    let mut text = header;
    for p in &curve.points {
        let mut line = format!("{},{},{}", fmt(p.xi), fmt(p.amplitude), fmt(p.residual));
        for &c in &p.coeffs {
            line.push(',');
            line.push_str(&fmt(c));
        }
        line.push('\n');
        text.push_str(&line);
    }
    fs::write(&path, text)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn write_curve_plot(dir: &Path) -> Result<String, CliError> {
    ensure_dir(dir)?;
    let path = dir.join("curve.gp");
    let mut file = fs::File::create(&path)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    write!(
        file,
        "# Solution curve A(xi) of the Dirichlet problem\n\
         set datafile separator ','\n\
         set xlabel 'xi'\n\
         set ylabel 'A'\n\
         set grid\n\
         plot 'curve.csv' skip 1 using 1:2 with lines title 'A(xi)'\n"
    )
    .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}
