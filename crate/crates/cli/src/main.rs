// SPDX-License-Identifier: Apache-2.0

//! `edrsim`: sweeps, relation checks and circuit export for the weak-probe
//! error-disturbance experiment.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use edr_core::circuit::{build_edr_circuit_from_strengths, export_qasm};
use edr_core::edr::{classify, effective_bound, EdrInputs, RelationRegistry};
use edr_core::noise::{load_profile, CalibrationProfile};
use edr_core::selfcheck::run_self_checks;
use edr_core::sweep::{self, emit_csv, emit_json, run_sweep, SweepConfig};

/// Directory that relative `--out` paths, and default output files, go to.
const OUT_DIR_ENV: &str = "EDRSIM_OUT_DIR";

const BUILTIN_PREFIX: &str = "builtin:";

#[derive(Parser, Debug)]
#[command(name = "edrsim", version, about = "Simulate weak-probe tests of error-disturbance relations")]
struct Cli {
    /// Worker threads (0 picks one per core). Never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a measurement-strength sweep and write CSV or JSON.
    Sweep(SweepArgs),
    /// Evaluate the four relations at one point.
    Bounds(BoundsArgs),
    /// Write the circuit for one strength as OpenQASM 2.0.
    ExportQasm(QasmArgs),
    /// Run the built-in invariant and oracle checks.
    Check,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Exact,
    Sampled,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MomentsArg {
    Ideal,
    Simulated,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Strength cos θ_w of the weak probes.
    #[arg(long, default_value_t = sweep::DEFAULT_PROBE_STRENGTH)]
    theta_w_strength: f64,
    /// Explicit main-measurement strengths.
    #[arg(long, value_delimiter = ',', conflicts_with = "grid")]
    strengths: Option<Vec<f64>>,
    /// Evenly spaced strengths from 0 to 1.
    #[arg(long, default_value_t = sweep::DEFAULT_GRID_POINTS)]
    grid: usize,
    #[arg(long, default_value_t = sweep::DEFAULT_SHOTS)]
    shots: u64,
    #[arg(long, default_value_t = sweep::DEFAULT_REPEATS)]
    repeats: usize,
    #[arg(long, default_value_t = sweep::DEFAULT_SEED)]
    seed: u64,
    /// Calibration profile file, or `builtin:representative`.
    #[arg(long, value_name = "FILE")]
    noise: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
    mode: ModeArg,
    /// Where σ_A, σ_B and C come from.
    #[arg(long, value_enum, default_value_t = MomentsArg::Ideal)]
    moments: MomentsArg,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_a: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_b: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Args, Debug)]
struct QasmArgs {
    #[arg(long, default_value_t = sweep::DEFAULT_PROBE_STRENGTH)]
    theta_w_strength: f64,
    /// Main-measurement strength cos θ.
    #[arg(long)]
    strength: f64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Failure class, mapped to the exit status.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Sweep(args) => sweep_cmd(args),
        Command::Bounds(args) => bounds_cmd(args),
        Command::ExportQasm(args) => qasm_cmd(args),
        Command::Check => check_cmd(),
    }
}

fn load_noise(source: &str) -> anyhow::Result<CalibrationProfile> {
    match source.strip_prefix(BUILTIN_PREFIX) {
        Some("representative") => Ok(CalibrationProfile::representative()),
        Some("noiseless") => Ok(CalibrationProfile::noiseless()),
        Some(other) => bail!("unknown built-in profile `{other}`"),
        None => Ok(load_profile(source)?),
    }
}

fn sweep_cmd(args: SweepArgs) -> Result<ExitCode, Failure> {
    let noise = args.noise.as_deref().map(load_noise).transpose()?;
    let cfg = SweepConfig {
        theta_w_strength: args.theta_w_strength,
        strengths: args.strengths.unwrap_or_else(|| sweep::grid(args.grid)),
        shots: args.shots,
        repeats: args.repeats,
        seed: args.seed,
        noise,
        mode: match args.mode {
            ModeArg::Exact => sweep::Mode::Exact,
            ModeArg::Sampled => sweep::Mode::Sampled,
            ModeArg::Both => sweep::Mode::Both,
        },
        moments: match args.moments {
            MomentsArg::Ideal => sweep::MomentSource::Ideal,
            MomentsArg::Simulated => sweep::MomentSource::Simulated,
        },
    };
    cfg.validate().map_err(usage)?;
    let rows = run_sweep(&cfg).context("sweep failed")?;
    let text = match args.format {
        Format::Csv => emit_csv(&rows),
        Format::Json => emit_json(&cfg, &rows),
    }
    .context("cannot format results")?;
    let default_name = match args.format {
        Format::Csv => "sweep.csv",
        Format::Json => "sweep.json",
    };
    write_output(resolve_out(args.out, default_name).as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn bounds_cmd(args: BoundsArgs) -> Result<ExitCode, Failure> {
    let inputs = EdrInputs::new(args.epsilon, args.eta, args.sigma_a, args.sigma_b, args.c).map_err(usage)?;
    let report = classify(&inputs, &RelationRegistry::default()).map_err(usage)?;
    let text = match args.format {
        TextFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).context("cannot format report")?;
            s.push('\n');
            s
        }
        TextFormat::Text => {
            let mut s = String::new();
            for o in &report.outcomes {
                let verdict = if o.satisfied { "satisfied" } else { "violated" };
                s += &format!("{:<17} lhs = {:.6}  {verdict}\n", o.name, o.lhs);
            }
            s
        }
    };
    write_output(None, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn qasm_cmd(args: QasmArgs) -> Result<ExitCode, Failure> {
    let circuit = build_edr_circuit_from_strengths(args.theta_w_strength, args.strength).map_err(usage)?;
    let name = format!("edr_{}.qasm", args.strength);
    write_output(resolve_out(args.out, &name).as_deref(), &export_qasm(&circuit))?;
    Ok(ExitCode::SUCCESS)
}

fn check_cmd() -> Result<ExitCode, Failure> {
    let results = run_self_checks();
    let mut out = String::new();
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        out += &format!("{tag}  {}: {}\n", r.name, r.detail);
    }
    let tw = sweep::DEFAULT_PROBE_STRENGTH.acos();
    out += &format!("effective bound at default probes: {:.6}\n", effective_bound(tw));
    write_output(None, &out)?;
    if results.iter().all(|r| r.passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn resolve_out(out: Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()).map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p),
        (None, Some(dir)) => Some(dir.join(default_name)),
        (None, None) => None,
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("cannot create {}", parent.display()))?;
            }
            std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("cannot write to stdout")
        }
    }
}
