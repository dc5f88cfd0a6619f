//! Command-line surface. A thin shell: every number printed here comes
//! from a library call; this module only sequences them and formats.
//! Exit codes: 0 success, 2 config error, 3 numerical failure.

use crate::config::{ConfigError, RunConfig};
use crate::couplings::{self, CouplingError};
use crate::gaussian::EngineError;
use crate::kernel::{
    collective_output_variance, exact_double_pass_conditional_variance, pde_oracle, KernelError,
    PassSetup,
};
use crate::report;
use crate::scenarios::{self, Geometry, ScenarioConfig, ScenarioError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(
    name = "qnd-align",
    version,
    about = "Conditional squeezing of an atomic alignment probed by polarimetry"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one measurement geometry and report its moments
    Run(RunArgs),
    /// Sweep the probe detuning and tabulate couplings and noise
    Sweep(SweepArgs),
    /// Cross-check the exact kernels against the finite-difference oracle
    KernelCheck(KernelCheckArgs),
    /// Parse, override, and validate a config; print the effective document
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config path; built-in defaults apply when omitted
    #[arg(long, value_name = "path")]
    pub config: Option<PathBuf>,
    /// Geometry name override (see `validate` output for the current one)
    #[arg(long, value_name = "name")]
    pub geometry: Option<String>,
    /// Dotted-path override, repeatable: --set experiment.detuning_mhz=50
    #[arg(long = "set", value_name = "key=value")]
    pub set: Vec<String>,
    /// Write the machine-readable record (one JSON line) here
    #[arg(long, value_name = "path")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "path")]
    pub config: Option<PathBuf>,
    #[arg(long = "set", value_name = "key=value")]
    pub set: Vec<String>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "path")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    #[value(name = "json-lines")]
    JsonLines,
}

#[derive(Debug, Args)]
pub struct KernelCheckArgs {
    /// Coupling strength, validated range [0, 1]
    #[arg(long, default_value_t = 0.35)]
    pub kappa_t: f64,
    /// Grid size per axis; at least 256 so the convergence estimate can
    /// use the grid/4 and grid/2 refinements
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_name = "path")]
    pub config: Option<PathBuf>,
    #[arg(long = "set", value_name = "key=value")]
    pub set: Vec<String>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CouplingError> for CliError {
    fn from(e: CouplingError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Engine(inner) => CliError::from(inner),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::KappaOutOfRange(_) | KernelError::GridTooCoarse { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn effective_config(
    path: Option<&PathBuf>,
    geometry: Option<&str>,
    sets: &[String],
) -> Result<RunConfig, CliError> {
    let base = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut overrides = Vec::new();
    if let Some(name) = geometry {
        // parse eagerly for a clean message naming the geometry
        Geometry::from_str(name).map_err(|e| CliError::Config(e.to_string()))?;
        overrides.push(format!("scenario.geometry={name}"));
    }
    overrides.extend_from_slice(sets);
    let config = base.with_overrides(&overrides)?;
    config.validate()?;
    Ok(config)
}

/// Builds the scenario input from a validated config.
pub fn scenario_from_config(config: &RunConfig) -> Result<ScenarioConfig, CliError> {
    let params = config.experiment_params()?;
    let coupling =
        couplings::coupling_set_with(&params, config.scenario.noise_includes_upper)?;
    let ratio = if params.atoms_n > 0.0 && params.photons_n > 0.0 {
        params.photons_n / params.atoms_n
    } else {
        0.0
    };
    Ok(ScenarioConfig {
        geometry: config.scenario.geometry,
        coupling,
        include_noise: config.scenario.include_noise,
        larmor_phase: config.scenario.larmor_phase,
        light_shift_compensation: config.scenario.light_shift_compensation,
        photon_atom_ratio: ratio,
    })
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::KernelCheck(args) => cmd_kernel_check(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let config = effective_config(args.config.as_ref(), args.geometry.as_deref(), &args.set)?;
    let scenario = scenario_from_config(&config)?;
    let result = scenarios::evaluate(&scenario)?;
    let record = report::record(&result);
    print!("{}", report::human_report(&record));
    if let Some(out) = &args.out {
        write_out(out, &report::json_line(&record))?;
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let config = effective_config(args.config.as_ref(), None, &args.set)?;
    let params = config.experiment_params()?;
    let points = couplings::sweep_detuning(
        &params,
        config.sweep.start_norm,
        config.sweep.stop_norm,
        config.sweep.steps,
    )?;
    let text = match args.format {
        OutputFormat::Csv => report::sweep_csv(&points),
        OutputFormat::JsonLines => report::sweep_json_lines(&points),
    };
    match &args.out {
        Some(path) => write_out(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_kernel_check(args: KernelCheckArgs) -> Result<(), CliError> {
    let kappa = args.kappa_t;
    if !(0.0..=1.0).contains(&kappa) {
        return Err(CliError::Config(format!(
            "kappa_t = {kappa} outside the kernel-check range [0, 1]"
        )));
    }
    if args.grid < 256 {
        return Err(CliError::Config(format!(
            "grid {} too coarse: kernel-check needs at least 256 per axis",
            args.grid
        )));
    }
    let analytic = collective_output_variance(kappa)?;
    let grids = [args.grid / 4, args.grid / 2, args.grid];
    let mut vars = Vec::new();
    let mut last = None;
    for g in grids {
        let sol = pde_oracle(kappa, g, g, PassSetup::Single)?;
        vars.push(sol.var_x());
        last = Some(sol);
    }
    let oracle = last.expect("three grids ran");
    let discrepancy = (oracle.var_x() - analytic.var_x)
        .abs()
        .max((oracle.var_sy() - analytic.var_sy).abs())
        .max((oracle.cov_x_sy() - analytic.cov_x_sy).abs());

    let mut out = String::new();
    let _ = writeln!(out, "kernel check: kappa_t = {kappa}, grid {0} x {0}", args.grid);
    let _ = writeln!(
        out,
        "  analytic kernels:  Var(x_out) = {:.12}  Cov(x_out, s_y_out) = {:+.3e}",
        analytic.var_x, analytic.cov_x_sy
    );
    let _ = writeln!(
        out,
        "  grid oracle:       Var(x_out) = {:.12}  Cov(x_out, s_y_out) = {:+.3e}",
        oracle.var_x(),
        oracle.cov_x_sy()
    );
    let _ = writeln!(out, "  discrepancy: {discrepancy:.3e}");
    let e1 = (vars[0] - analytic.var_x).abs();
    let e2 = (vars[1] - analytic.var_x).abs();
    let e3 = (vars[2] - analytic.var_x).abs();
    if e2 > 1e-14 && e3 > 1e-14 {
        let order = 0.5 * ((e1 / e2).log2() + (e2 / e3).log2());
        let _ = writeln!(
            out,
            "  convergence order estimate: {order:.2} (errors {e1:.2e} -> {e2:.2e} -> {e3:.2e})"
        );
    } else {
        let _ = writeln!(out, "  convergence order estimate: n/a (errors at machine precision)");
    }
    if 4.0 * kappa * kappa < 1.0 {
        let _ = writeln!(
            out,
            "  double-pass conditional variance, first order: {:.6}",
            1.0 - 4.0 * kappa * kappa
        );
    }
    match exact_double_pass_conditional_variance(kappa) {
        Ok(v) => {
            let _ = writeln!(out, "  double-pass conditional variance, exact kernels: {v:.6}");
        }
        Err(KernelError::KappaOutOfRange(_)) => {
            let _ = writeln!(
                out,
                "  double-pass exact value skipped: kappa_t above the validated range [0, 0.6]"
            );
        }
        Err(e) => return Err(e.into()),
    }
    print!("{out}");
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let config = effective_config(args.config.as_ref(), None, &args.set)?;
    println!("config ok (schema_version {})", config.schema_version);
    print!("{}", config.to_toml());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_override_is_validated_before_running() {
        let err = effective_config(None, Some("sideways"), &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn error_code_mapping() {
        assert_eq!(CliError::from(KernelError::KappaOutOfRange(0.9)).exit_code(), 2);
        assert_eq!(
            CliError::from(KernelError::Unstable { kappa_t: 3.0, nz: 64, nt: 64 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(KernelError::GridTooCoarse { nz: 32, nt: 64 }).exit_code(),
            2
        );
        assert_eq!(CliError::from(EngineError::ZeroVarianceMeasurement).exit_code(), 3);
    }

    #[test]
    fn default_run_pipeline_builds() {
        let config = effective_config(None, Some("double_pass"), &[]).unwrap();
        let scenario = scenario_from_config(&config).unwrap();
        assert_eq!(scenario.geometry, Geometry::DoublePass);
        assert!(scenario.include_noise);
        assert!((scenario.photon_atom_ratio - 1.0).abs() < 1e-15);
        let result = scenarios::evaluate(&scenario).unwrap();
        assert!(result.conditional_variances.contains_key("x|sy_engine"));
    }
}
