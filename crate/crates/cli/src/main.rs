use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holodd::exec::Execution;
use holodd::hamiltonian::{EncodingKind, EnvelopeKind};
use holodd::harness::config::{ConfigError, RunConfig, ScheduleKind, SweepMode};
use holodd::harness::sweep::{run_interaction_scaling, scaling_csv, scaling_slopes};
use holodd::harness::{run_dd_sweep, run_gate, run_verify, sweep_csv, SweepError, VerifyContext};
use holodd::noise::NoiseVariant;

const EXIT_VERIFY: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "holodd", version, about = "Decoupling-protected nonadiabatic holonomic gate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the one-qubit gate
    Gate1(GateArgs),
    /// Simulate the two-qubit gate
    Gate2(GateArgs),
    /// Sweep the pulse interval and write a CSV
    Ddsweep(SweepArgs),
    /// Run every invariant suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long, value_enum)]
    envelope: Option<EnvelopeArg>,
    #[arg(long)]
    total_time: Option<f64>,
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    bath_dim: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Midpoint steps per pulse interval
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    ensemble_size: Option<usize>,
    #[arg(long)]
    bath_initial: Option<usize>,
    /// Disable the thread pool
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct GateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Pulse interval; total_time must be a whole number of 4*tau cycles
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated pulse intervals
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    gate: Option<GateArg>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long, value_enum)]
    sweep_mode: Option<SweepModeArg>,
    /// Single-cycle defects with the gate Hamiltonian and bath Hamiltonian off
    #[arg(long)]
    interaction_only: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the summary as JSON
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum EnvelopeArg {
    Constant,
    Sine,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ScheduleArg {
    None,
    Xyz4,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum VariantArg {
    Independent,
    Collective,
    Dephasing,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum GateArg {
    OneQubit,
    TwoQubit,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SweepModeArg {
    FixedCycles,
    FixedTime,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<holodd::Error> for Failure {
    fn from(e: holodd::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Config(c) => c.into(),
            SweepError::Run(r) => r.into(),
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn load(common: &CommonArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($dst:expr, $src:expr) => {
            if let Some(v) = $src {
                $dst = Some(v);
            }
        };
    }
    set!(cfg.theta, common.theta);
    set!(cfg.phi, common.phi);
    set!(
        cfg.envelope,
        common.envelope.map(|e| match e {
            EnvelopeArg::Constant => EnvelopeKind::Constant,
            EnvelopeArg::Sine => EnvelopeKind::Sine,
        })
    );
    set!(cfg.total_time, common.total_time);
    set!(cfg.cycles, common.cycles);
    set!(
        cfg.schedule,
        common.schedule.map(|s| match s {
            ScheduleArg::None => ScheduleKind::None,
            ScheduleArg::Xyz4 => ScheduleKind::Xyz4,
        })
    );
    set!(cfg.noise.epsilon, common.eps);
    set!(cfg.noise.eta, common.eta);
    set!(cfg.noise.bath_dim, common.bath_dim);
    set!(
        cfg.noise.variant,
        common.variant.map(|v| match v {
            VariantArg::Independent => NoiseVariant::Independent,
            VariantArg::Collective => NoiseVariant::Collective,
            VariantArg::Dephasing => NoiseVariant::Dephasing,
        })
    );
    set!(cfg.noise.seed, common.seed);
    set!(cfg.steps_per_interval, common.steps);
    set!(cfg.ensemble_size, common.ensemble_size);
    set!(cfg.bath_initial, common.bath_initial);
    Ok(cfg)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gate(args: &GateArgs, kind: EncodingKind) -> Result<(), Failure> {
    let mut cfg = load(&args.common)?;
    cfg.gate = Some(kind);
    if args.tau.is_some() {
        cfg.tau = args.tau;
    }
    let resolved = cfg.resolve()?;
    let report = run_gate(&resolved)?;
    let out = args.common.out.clone().or_else(|| resolved.outputs.report.clone());
    emit(out.as_deref(), &report.to_json())?;
    if out.is_some() {
        print!("{}", report.summary());
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let mut cfg = load(&args.common)?;
    if let Some(taus) = &args.tau {
        cfg.sweep.tau_grid = taus.clone();
    }
    if let Some(g) = args.gate {
        cfg.gate = Some(match g {
            GateArg::OneQubit => EncodingKind::OneQubit,
            GateArg::TwoQubit => EncodingKind::TwoQubit,
        });
    }
    if args.replicates.is_some() {
        cfg.sweep.replicates = args.replicates;
    }
    if let Some(m) = args.sweep_mode {
        cfg.sweep.mode = Some(match m {
            SweepModeArg::FixedCycles => SweepMode::FixedCycles,
            SweepModeArg::FixedTime => SweepMode::FixedTime,
        });
    }
    if args.interaction_only {
        cfg.sweep.interaction_only = Some(true);
    }
    let resolved = cfg.resolve()?;
    let exec = execution(args.common.sequential);
    let out = args.common.out.clone().or_else(|| resolved.outputs.csv.clone());
    if resolved.sweep.interaction_only {
        let rows = run_interaction_scaling(&resolved, exec)?;
        emit(out.as_deref(), &scaling_csv(&rows))?;
        if let Some((dd, free)) = scaling_slopes(&rows) {
            eprintln!("log-log slope: dd {dd:.4}, no dd {free:.4}");
        }
    } else {
        let rows = run_dd_sweep(&resolved, exec)?;
        emit(out.as_deref(), &sweep_csv(&rows))?;
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let ctx = VerifyContext { seed: args.seed.unwrap_or(0), exec: execution(args.sequential), ..Default::default() };
    let summary = run_verify(&ctx);
    for s in &summary.suites {
        println!("{s}");
    }
    let failed = summary.failed().len();
    println!("{} suites, {failed} failed", summary.suites.len());
    if let Some(p) = &args.out {
        let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        json.push('\n');
        emit(Some(p), &json)?;
    }
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gate1(a) => gate(a, EncodingKind::OneQubit).map(|_| true),
        Command::Gate2(a) => gate(a, EncodingKind::TwoQubit).map(|_| true),
        Command::Ddsweep(a) => sweep(a).map(|_| true),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
