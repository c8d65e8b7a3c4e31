use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use swanson::cli::{execute, Command, MethodChoice, OutputFormat, RunConfig};
use swanson::Error;

/// Hermitian equivalents and spectra of the generalized Swanson Hamiltonian.
#[derive(Parser)]
#[command(name = "swanson", version)]
struct Cli {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// List the built-in mass profiles.
    Profiles,
    /// Classify the z-image and tabulate z(x) and V_eff.
    Analyze(RunArgs),
    /// Analytic spectrum, optionally cross-checked by finite differences.
    Spectrum(RunArgs),
    /// Run every applicable check and report PASS/FAIL.
    Verify(RunArgs),
    /// Reproduce both profile tables.
    Tables(RunArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// Catalog profile name (see `swanson profiles`).
    #[arg(long)]
    profile: Option<String>,
    /// Mass m(x).
    #[arg(long)]
    m: Option<String>,
    /// Coefficient A(x) of d/dx.
    #[arg(long = "A")]
    a: Option<String>,
    /// Explicit B(x); derived from the commutator condition when absent.
    #[arg(long = "B")]
    b: Option<String>,
    /// Formula parameter, NAME=VALUE (repeatable).
    #[arg(long = "param", value_parser = parse_binding)]
    params: Vec<(String, f64)>,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Grid intervals for the finite-difference oracles.
    #[arg(long = "N")]
    grid: Option<usize>,
    /// Half-width of the x window for oracles and sampled grids.
    #[arg(long)]
    truncation: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Points in sampled x grids.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write one x,z,phi,psi,psi_gs CSV per level.
    #[arg(long)]
    emit_wavefunctions: bool,
    #[arg(long)]
    wavefunction_dir: Option<PathBuf>,
    /// Add finite-difference spectra.
    #[arg(long)]
    oracle: bool,
    /// Use the anti-normal ordering w(a a^+ + 1/2).
    #[arg(long)]
    convention_shift: bool,
}

fn parse_binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v: f64 = value.trim().parse().map_err(|e| format!("{name}: {e}"))?;
    Ok((name.trim().to_string(), v))
}

impl RunArgs {
    fn apply(self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($($field:ident),*) => {$( if let Some(v) = self.$field { cfg.$field = v; } )*};
        }
        macro_rules! set_opt {
            ($($field:ident),*) => {$( if self.$field.is_some() { cfg.$field = self.$field; } )*};
        }
        set_opt!(profile, m, a, b, w, grid, truncation, output);
        set!(alpha, beta, k, n_max, tol, samples, method, format, wavefunction_dir);
        cfg.params.extend(self.params);
        cfg.emit_wavefunctions |= self.emit_wavefunctions;
        cfg.oracle |= self.oracle;
        cfg.convention_shift |= self.convention_shift;
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::default(),
    };
    let (command, args) = match cli.command {
        Sub::Profiles => (Command::Profiles, RunArgs::default()),
        Sub::Analyze(a) => (Command::Analyze, a),
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Tables(a) => (Command::Tables, a),
    };
    args.apply(&mut cfg);
    let outcome = execute(command, &cfg)?;
    std::io::stdout().write_all(outcome.text.as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SWANSON_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        // failed checks are data, reported in the output
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
