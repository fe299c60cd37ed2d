//! Run configuration: JSON file values, CLI overrides and resolution of
//! every default into a fully materialized [`ResolvedConfig`].

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::evolution::DEFAULT_STEPS_PER_INTERVAL;
use crate::hamiltonian::{EncodingKind, Envelope, EnvelopeKind};
use crate::noise::NoiseVariant;

/// Cycle count used when neither `tau` nor `cycles` is given.
pub const DEFAULT_CYCLES: usize = 16;
pub const DEFAULT_BATH_DIM: usize = 4;
pub const DEFAULT_ENSEMBLE_SIZE: usize = 20;
pub const DEFAULT_REPLICATES: usize = 5;
pub const DEFAULT_PT_SAMPLES: usize = 100;
/// Default `ε` and `η` as multiples of `π / T`.
pub const DEFAULT_EPSILON_FACTOR: f64 = 0.05;
pub const DEFAULT_ETA_FACTOR: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io { path: PathBuf, message: String },
    Parse { line: usize, column: usize, message: String },
    Field { field: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, message } => write!(f, "cannot read {}: {message}", path.display()),
            ConfigError::Parse { line, column, message } => {
                write!(f, "config parse error at line {line}, column {column}: {message}")
            }
            ConfigError::Field { field, message } => write!(f, "invalid config field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn field(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.to_string(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    None,
    #[default]
    Xyz4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Fixed cycle count; `T = 4 τ cycles` per row.
    #[default]
    FixedCycles,
    /// Fixed gate time; `cycles = T / 4τ` per row.
    FixedTime,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub bath_dim: Option<usize>,
    pub variant: Option<NoiseVariant>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub tau_grid: Vec<f64>,
    pub replicates: Option<usize>,
    pub mode: Option<SweepMode>,
    /// Per-cycle defect scan with `J = 0`, `η = 0`.
    pub interaction_only: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Configuration as read from a file; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub gate: Option<EncodingKind>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub envelope: Option<EnvelopeKind>,
    pub total_time: Option<f64>,
    pub steps_per_interval: Option<usize>,
    pub schedule: Option<ScheduleKind>,
    pub tau: Option<f64>,
    pub cycles: Option<usize>,
    pub noise: NoiseConfig,
    pub ensemble_size: Option<usize>,
    pub bath_initial: Option<usize>,
    pub pt_samples: Option<usize>,
    pub sweep: SweepConfig,
    pub outputs: Outputs,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<ResolvedConfig, ConfigError> {
        let gate = self.gate.unwrap_or(EncodingKind::OneQubit);
        let theta = self.theta.unwrap_or(PI / 2.0);
        let phi = self.phi.unwrap_or(0.0);
        for (name, v) in [("theta", theta), ("phi", phi)] {
            if !v.is_finite() {
                return Err(field(name, "must be finite"));
            }
        }
        let total_time = self.total_time.unwrap_or(1.0);
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(field("total_time", format!("must be positive, got {total_time}")));
        }
        let steps_per_interval = self.steps_per_interval.unwrap_or(DEFAULT_STEPS_PER_INTERVAL);
        if steps_per_interval == 0 {
            return Err(field("steps_per_interval", "must be at least 1"));
        }
        let schedule = self.schedule.unwrap_or_default();

        let (tau, cycles) = resolve_cycles(total_time, self.tau, self.cycles)?;

        let epsilon = self.noise.epsilon.unwrap_or(DEFAULT_EPSILON_FACTOR * PI / total_time);
        let eta = self.noise.eta.unwrap_or(DEFAULT_ETA_FACTOR * PI / total_time);
        for (name, v) in [("noise.epsilon", epsilon), ("noise.eta", eta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(field(name, format!("must be finite and non-negative, got {v}")));
            }
        }
        let bath_dim = self.noise.bath_dim.unwrap_or(DEFAULT_BATH_DIM);
        if bath_dim == 0 {
            return Err(field("noise.bath_dim", "must be at least 1"));
        }
        let n_qubits = match gate {
            EncodingKind::OneQubit => 3,
            EncodingKind::TwoQubit => 6,
        };
        if (1usize << n_qubits) * bath_dim > crate::linalg::MAX_DIM {
            return Err(field("noise.bath_dim", format!("joint dimension exceeds {}", crate::linalg::MAX_DIM)));
        }
        let bath_initial = self.bath_initial.unwrap_or(0);
        if bath_initial >= bath_dim {
            return Err(field("bath_initial", format!("must be below bath_dim = {bath_dim}")));
        }
        let ensemble_size = self.ensemble_size.unwrap_or(DEFAULT_ENSEMBLE_SIZE);
        if ensemble_size == 0 {
            return Err(field("ensemble_size", "must be at least 1"));
        }
        let pt_samples = self.pt_samples.unwrap_or(DEFAULT_PT_SAMPLES);
        if pt_samples < 2 {
            return Err(field("pt_samples", "must be at least 2"));
        }
        if let Some(bad) = self.sweep.tau_grid.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(field("sweep.tau_grid", format!("entries must be positive, got {bad}")));
        }
        let replicates = self.sweep.replicates.unwrap_or(DEFAULT_REPLICATES);
        if replicates == 0 {
            return Err(field("sweep.replicates", "must be at least 1"));
        }

        Ok(ResolvedConfig {
            gate,
            theta,
            phi,
            envelope: self.envelope.unwrap_or(EnvelopeKind::Constant),
            total_time,
            steps_per_interval,
            schedule,
            tau,
            cycles,
            noise: ResolvedNoise {
                epsilon,
                eta,
                bath_dim,
                variant: self.noise.variant.unwrap_or_default(),
                seed: self.noise.seed.unwrap_or(0),
            },
            ensemble_size,
            bath_initial,
            pt_samples,
            sweep: ResolvedSweep {
                tau_grid: self.sweep.tau_grid.clone(),
                replicates,
                mode: self.sweep.mode.unwrap_or_default(),
                interaction_only: self.sweep.interaction_only.unwrap_or(false),
            },
            outputs: self.outputs.clone(),
        })
    }
}

/// `T = 4 τ cycles` with an integer cycle count.
pub fn resolve_cycles(total_time: f64, tau: Option<f64>, cycles: Option<usize>) -> Result<(f64, usize), ConfigError> {
    match (tau, cycles) {
        (None, c) => {
            let c = c.unwrap_or(DEFAULT_CYCLES);
            if c == 0 {
                return Err(field("cycles", "must be at least 1"));
            }
            Ok((total_time / (4.0 * c as f64), c))
        }
        (Some(t), c) => {
            if !(t.is_finite() && t > 0.0) {
                return Err(field("tau", format!("must be positive, got {t}")));
            }
            let exact = total_time / (4.0 * t);
            let rounded = exact.round();
            if rounded < 1.0 || (exact - rounded).abs() > 1e-9 * exact.max(1.0) {
                return Err(field(
                    "tau",
                    format!("total_time {total_time} is not a whole number of 4*tau cycles (tau = {t})"),
                ));
            }
            let derived = rounded as usize;
            if let Some(c) = c {
                if c != derived {
                    return Err(field(
                        "cycles",
                        format!("{c} cycles of 4*tau = {} do not cover total_time {total_time}", 4.0 * t),
                    ));
                }
            }
            Ok((t, derived))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedNoise {
    pub epsilon: f64,
    pub eta: f64,
    pub bath_dim: usize,
    pub variant: NoiseVariant,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSweep {
    pub tau_grid: Vec<f64>,
    pub replicates: usize,
    pub mode: SweepMode,
    pub interaction_only: bool,
}

/// Configuration with every default materialized; embedded in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub gate: EncodingKind,
    pub theta: f64,
    pub phi: f64,
    pub envelope: EnvelopeKind,
    pub total_time: f64,
    pub steps_per_interval: usize,
    pub schedule: ScheduleKind,
    pub tau: f64,
    pub cycles: usize,
    pub noise: ResolvedNoise,
    pub ensemble_size: usize,
    pub bath_initial: usize,
    pub pt_samples: usize,
    pub sweep: ResolvedSweep,
    pub outputs: Outputs,
}

impl ResolvedConfig {
    pub fn envelope(&self) -> Envelope {
        Envelope { kind: self.envelope, total_time: self.total_time }
    }

    pub fn n_qubits(&self) -> usize {
        match self.gate {
            EncodingKind::OneQubit => 3,
            EncodingKind::TwoQubit => 6,
        }
    }

    pub fn n_intervals(&self) -> usize {
        4 * self.cycles
    }

    /// Midpoint steps over the whole gate for undecoupled evolution.
    pub fn total_steps(&self) -> usize {
        self.steps_per_interval * self.n_intervals()
    }
}
