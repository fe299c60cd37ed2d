//! Single gate runs: closed-system analysis plus, when the coupling is
//! nonzero, ensemble fidelity with and without decoupling.

use serde::{Deserialize, Serialize};

use super::config::{ResolvedConfig, ScheduleKind};
use crate::error::Result;
use crate::evolution::{evolve_with_dd, evolve_without_dd, JointSystem, PulseSchedule};
use crate::hamiltonian::{build_h1, build_h2, EncodingKind, Envelope, GateParams1Q, GateParams2Q, LogicalEncoding, TimeDependentHamiltonian};
use crate::holonomy::{analytic_target, closed_system_report, ensemble_fidelity, random_logical_states, EnsembleOutcome, GateReport};
use crate::noise::{build_interaction, sample_noise};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenSystemReport {
    /// `None` when the schedule is `none`.
    pub dd: Option<EnsembleOutcome>,
    pub no_dd: EnsembleOutcome,
    pub ensemble_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ResolvedConfig,
    pub closed_system: GateReport,
    pub open_system: Option<OpenSystemReport>,
}

pub fn gate_hamiltonian(kind: EncodingKind, theta: f64, phi: f64, envelope: Envelope) -> TimeDependentHamiltonian {
    match kind {
        EncodingKind::OneQubit => build_h1(&GateParams1Q { theta1: theta, phi1: phi, envelope }),
        EncodingKind::TwoQubit => build_h2(&GateParams2Q { theta2: theta, phi2: phi, envelope }),
    }
}

/// Everything needed to evaluate one noisy realization.
#[derive(Clone, Debug)]
pub struct OpenSystemSpec {
    pub kind: EncodingKind,
    pub theta: f64,
    pub phi: f64,
    pub envelope: Envelope,
    pub tau: f64,
    pub cycles: usize,
    pub steps_per_interval: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub bath_dim: usize,
    pub variant: crate::noise::NoiseVariant,
    pub seed: u64,
    pub ensemble_size: usize,
    pub bath_initial: usize,
    pub with_dd: bool,
}

impl OpenSystemSpec {
    pub fn from_config(cfg: &ResolvedConfig) -> Self {
        Self {
            kind: cfg.gate,
            theta: cfg.theta,
            phi: cfg.phi,
            envelope: cfg.envelope(),
            tau: cfg.tau,
            cycles: cfg.cycles,
            steps_per_interval: cfg.steps_per_interval,
            epsilon: cfg.noise.epsilon,
            eta: cfg.noise.eta,
            bath_dim: cfg.noise.bath_dim,
            variant: cfg.noise.variant,
            seed: cfg.noise.seed,
            ensemble_size: cfg.ensemble_size,
            bath_initial: cfg.bath_initial,
            with_dd: cfg.schedule == ScheduleKind::Xyz4,
        }
    }

    pub fn evaluate(&self) -> Result<OpenSystemReport> {
        let encoding = LogicalEncoding::for_kind(self.kind);
        let n = encoding.n_qubits;
        let h = gate_hamiltonian(self.kind, self.theta, self.phi, self.envelope);
        let model = sample_noise(self.seed, n, self.bath_dim, self.epsilon, self.eta, self.variant)?;
        let h_int = build_interaction(&model, n)?;
        let joint = JointSystem::new(h, model.h_env.clone(), h_int)?;
        let target = analytic_target(self.kind, self.theta, self.phi);
        let states = random_logical_states(self.seed, self.ensemble_size, encoding.logical_dim());

        let steps = self.steps_per_interval * 4 * self.cycles;
        let u_free = evolve_without_dd(&joint, self.envelope.total_time, steps)?;
        let no_dd = ensemble_fidelity(&u_free, &encoding, &target, self.bath_dim, self.bath_initial, &states)?;
        let dd = if self.with_dd {
            let schedule = PulseSchedule::xyz4(n, self.tau, self.cycles)?;
            let u_dd = evolve_with_dd(&joint, &schedule, self.steps_per_interval)?;
            Some(ensemble_fidelity(&u_dd, &encoding, &target, self.bath_dim, self.bath_initial, &states)?)
        } else {
            None
        };
        Ok(OpenSystemReport { dd, no_dd, ensemble_size: self.ensemble_size })
    }
}

pub fn run_gate(cfg: &ResolvedConfig) -> Result<RunReport> {
    let encoding = LogicalEncoding::for_kind(cfg.gate);
    let h = gate_hamiltonian(cfg.gate, cfg.theta, cfg.phi, cfg.envelope());
    let closed = closed_system_report(&h, &encoding, cfg.theta, cfg.phi, cfg.total_steps(), cfg.pt_samples)?;
    let open = if cfg.noise.epsilon > 0.0 { Some(OpenSystemSpec::from_config(cfg).evaluate()?) } else { None };
    Ok(RunReport { config: cfg.clone(), closed_system: closed, open_system: open })
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary(&self) -> String {
        let c = &self.closed_system;
        let mut out = format!(
            "fidelity {:.15}\nleakage {:.3e}\ncyclic_residual {:.3e}\npt_residual {:.3e}\ngamma {:.12} (target {:.12})\n",
            c.fidelity, c.leakage, c.cyclic_residual, c.pt_residual, c.gamma, c.gamma_target
        );
        if let Some(o) = &self.open_system {
            if let Some(dd) = &o.dd {
                out += &format!("open_system dd: infidelity {:.6e} leakage {:.3e}\n", dd.infidelity(), dd.leakage);
            }
            out += &format!("open_system no_dd: infidelity {:.6e} leakage {:.3e}\n", o.no_dd.infidelity(), o.no_dd.leakage);
        }
        out
    }
}
