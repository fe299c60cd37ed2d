//! Sweeps over the pulse interval τ.

use serde::{Deserialize, Serialize};

use super::config::{resolve_cycles, ConfigError, ResolvedConfig, SweepMode};
use super::run::OpenSystemSpec;
use crate::error::{Error, Result};
use crate::evolution::{evolve_with_dd, evolve_without_dd, JointSystem, PulseSchedule};
use crate::exec::Execution;
use crate::hamiltonian::{Envelope, TimeDependentHamiltonian};
use crate::linalg::ComplexMatrix;
use crate::noise::{build_interaction, sample_noise};

pub const SWEEP_HEADER: &str = "tau,infidelity_dd,infidelity_nodd,leakage_dd,leakage_nodd,seed";
pub const SCALING_HEADER: &str = "tau,defect_dd,defect_nodd,seed";

/// `%.12g`: 12 significant digits, trailing zeros removed, exponent form
/// outside `[1e-4, 1e12)`.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Exponent after rounding to 12 digits, as %g decides.
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    pub infidelity_dd: f64,
    pub infidelity_nodd: f64,
    pub leakage_dd: f64,
    pub leakage_nodd: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub tau: f64,
    pub defect_dd: f64,
    pub defect_nodd: f64,
    pub seed: u64,
}

#[derive(Debug)]
pub enum SweepError {
    Config(ConfigError),
    Run(Error),
}

impl From<ConfigError> for SweepError {
    fn from(e: ConfigError) -> Self {
        SweepError::Config(e)
    }
}

impl From<Error> for SweepError {
    fn from(e: Error) -> Self {
        SweepError::Run(e)
    }
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Config(e) => e.fmt(f),
            SweepError::Run(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for SweepError {}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Replicate `r` uses noise seed `seed ^ r`, so every τ sees the same
/// noise realizations.
pub fn replicate_seed(base: u64, r: usize) -> u64 {
    base ^ r as u64
}

fn row_spec(cfg: &ResolvedConfig, tau: f64, r: usize) -> std::result::Result<OpenSystemSpec, SweepError> {
    let (total_time, cycles) = match cfg.sweep.mode {
        SweepMode::FixedCycles => (4.0 * tau * cfg.cycles as f64, cfg.cycles),
        SweepMode::FixedTime => {
            let (_, c) = resolve_cycles(cfg.total_time, Some(tau), None)?;
            (cfg.total_time, c)
        }
    };
    let mut spec = OpenSystemSpec::from_config(cfg);
    spec.envelope = Envelope::new(cfg.envelope, total_time)?;
    spec.tau = tau;
    spec.cycles = cycles;
    spec.seed = replicate_seed(cfg.noise.seed, r);
    spec.with_dd = true;
    Ok(spec)
}

/// One row per (τ, replicate), in grid order then replicate order.
pub fn run_dd_sweep(cfg: &ResolvedConfig, exec: Execution) -> std::result::Result<Vec<SweepRow>, SweepError> {
    if cfg.sweep.tau_grid.is_empty() {
        return Err(ConfigError::Field { field: "sweep.tau_grid".into(), message: "must not be empty".into() }.into());
    }
    let specs: Vec<OpenSystemSpec> = cfg
        .sweep
        .tau_grid
        .iter()
        .flat_map(|&tau| (0..cfg.sweep.replicates).map(move |r| (tau, r)))
        .map(|(tau, r)| row_spec(cfg, tau, r))
        .collect::<std::result::Result<_, _>>()?;
    let rows = exec.try_map(&specs, |spec| {
        let report = spec.evaluate()?;
        let dd = report.dd.expect("sweep rows always decouple");
        Ok::<_, Error>(SweepRow {
            tau: spec.tau,
            infidelity_dd: clamp_unit(dd.infidelity()),
            infidelity_nodd: clamp_unit(report.no_dd.infidelity()),
            leakage_dd: clamp_unit(dd.leakage),
            leakage_nodd: clamp_unit(report.no_dd.leakage),
            seed: spec.seed,
        })
    })?;
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out += &format!(
            "{},{},{},{},{},{}\n",
            format_g12(r.tau),
            format_g12(r.infidelity_dd),
            format_g12(r.infidelity_nodd),
            format_g12(r.leakage_dd),
            format_g12(r.leakage_nodd),
            r.seed
        );
    }
    out
}

/// Operator-norm distance from the identity of a single decoupled cycle
/// and of free evolution over the same `4τ`, with `H_S = 0` and `H_E = 0`.
pub fn interaction_only_defects(cfg: &ResolvedConfig, tau: f64, seed: u64) -> Result<ScalingRow> {
    let n = cfg.n_qubits();
    let d = cfg.noise.bath_dim;
    let model = sample_noise(seed, n, d, cfg.noise.epsilon, 0.0, cfg.noise.variant)?;
    let h_int = build_interaction(&model, n)?;
    let zero = TimeDependentHamiltonian::new(ComplexMatrix::zeros(1 << n), Envelope::constant(4.0 * tau)?)?;
    let joint = JointSystem::new(zero, ComplexMatrix::zeros(d), h_int)?;
    let schedule = PulseSchedule::xyz4(n, tau, 1)?;
    let id = ComplexMatrix::identity(joint.joint_dim());
    let u_dd = evolve_with_dd(&joint, &schedule, 1)?;
    let u_free = evolve_without_dd(&joint, 4.0 * tau, 1)?;
    Ok(ScalingRow { tau, defect_dd: (&u_dd - &id).op_norm(), defect_nodd: (&u_free - &id).op_norm(), seed })
}

pub fn run_interaction_scaling(cfg: &ResolvedConfig, exec: Execution) -> std::result::Result<Vec<ScalingRow>, SweepError> {
    if cfg.sweep.tau_grid.is_empty() {
        return Err(ConfigError::Field { field: "sweep.tau_grid".into(), message: "must not be empty".into() }.into());
    }
    let items: Vec<(f64, u64)> = cfg
        .sweep
        .tau_grid
        .iter()
        .flat_map(|&tau| (0..cfg.sweep.replicates).map(move |r| (tau, replicate_seed(cfg.noise.seed, r))))
        .collect();
    Ok(exec.try_map(&items, |&(tau, seed)| interaction_only_defects(cfg, tau, seed))?)
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from(SCALING_HEADER);
    out.push('\n');
    for r in rows {
        out += &format!("{},{},{},{}\n", format_g12(r.tau), format_g12(r.defect_dd), format_g12(r.defect_nodd), r.seed);
    }
    out
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slopes (DD, no DD) fitted to the geometric mean defect at each τ.
pub fn scaling_slopes(rows: &[ScalingRow]) -> Option<(f64, f64)> {
    let mut taus: Vec<f64> = rows.iter().map(|r| r.tau).collect();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let mean_log = |tau: f64, pick: fn(&ScalingRow) -> f64| {
        let v: Vec<f64> = rows.iter().filter(|r| r.tau == tau).map(|r| pick(r).ln()).collect();
        (v.iter().sum::<f64>() / v.len() as f64).exp()
    };
    let dd: Vec<f64> = taus.iter().map(|&t| mean_log(t, |r| r.defect_dd)).collect();
    let free: Vec<f64> = taus.iter().map(|&t| mean_log(t, |r| r.defect_nodd)).collect();
    Some((loglog_slope(&taus, &dd)?, loglog_slope(&taus, &free)?))
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
