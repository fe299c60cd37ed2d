//! Time-ordered propagation and pulse-interleaved (dynamically decoupled)
//! evolution on the joint system ⊗ environment space.

use crate::error::{Error, Result};
use crate::hamiltonian::TimeDependentHamiltonian;
use crate::linalg::{matexp_hermitian, ComplexMatrix, MAX_DIM, STRUCTURE_TOL};
use crate::operators::{collective_pauli, PauliAxis};

/// Midpoint sub-steps per pulse interval for non-commuting joint evolution.
pub const DEFAULT_STEPS_PER_INTERVAL: usize = 200;

const PULSE_TOL: f64 = 1e-12;

/// Ordered decoupling pulses applied around consecutive intervals of length
/// `tau`, repeated for `cycles` cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSchedule {
    sequence: Vec<ComplexMatrix>,
    tau: f64,
    cycles: usize,
}

impl PulseSchedule {
    pub fn new(sequence: Vec<ComplexMatrix>, tau: f64, cycles: usize) -> Result<Self> {
        if sequence.is_empty() {
            return Err(Error::ScheduleMismatch("empty pulse sequence".into()));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::ScheduleMismatch(format!("pulse interval must be positive, got {tau}")));
        }
        if cycles == 0 {
            return Err(Error::ScheduleMismatch("cycle count must be at least 1".into()));
        }
        let dim = sequence[0].dim();
        for (j, p) in sequence.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::ScheduleMismatch(format!(
                    "pulse {j} has dimension {}, expected {dim}",
                    p.dim()
                )));
            }
            let involution = (&(p * p) - &ComplexMatrix::identity(dim)).max_abs();
            if p.unitarity_residual() > PULSE_TOL || involution > PULSE_TOL {
                return Err(Error::ScheduleMismatch(format!(
                    "pulse {j} is not a unitary involution"
                )));
            }
        }
        Ok(Self { sequence, tau, cycles })
    }

    /// The `{I, ⊗X, ⊗Y, ⊗Z}` cycle on `n_qubits` qubits.
    pub fn xyz4(n_qubits: usize, tau: f64, cycles: usize) -> Result<Self> {
        let seq = PauliAxis::GROUP.iter().map(|&a| collective_pauli(a, n_qubits)).collect();
        Self::new(seq, tau, cycles)
    }

    /// `len` identity pulses per cycle: free evolution on the same time grid.
    pub fn identity(dim: usize, len: usize, tau: f64, cycles: usize) -> Result<Self> {
        Self::new(vec![ComplexMatrix::identity(dim); len], tau, cycles)
    }

    pub fn sequence(&self) -> &[ComplexMatrix] {
        &self.sequence
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn cycles(&self) -> usize {
        self.cycles
    }

    pub fn n_intervals(&self) -> usize {
        self.sequence.len() * self.cycles
    }

    pub fn total_time(&self) -> f64 {
        self.n_intervals() as f64 * self.tau
    }

    pub fn pulse_dim(&self) -> usize {
        self.sequence[0].dim()
    }
}

/// `ℋ(t) = H_S(t) ⊗ I_E + I_S ⊗ H_E + H_I`
#[derive(Clone, Debug, PartialEq)]
pub struct JointSystem {
    system: TimeDependentHamiltonian,
    h_env: ComplexMatrix,
    h_int: ComplexMatrix,
}

impl JointSystem {
    pub fn new(system: TimeDependentHamiltonian, h_env: ComplexMatrix, h_int: ComplexMatrix) -> Result<Self> {
        let joint = system.dim() * h_env.dim();
        if h_int.dim() != joint {
            return Err(Error::DimensionMismatch(format!(
                "interaction has dimension {}, expected {} x {} = {joint}",
                h_int.dim(),
                system.dim(),
                h_env.dim()
            )));
        }
        if joint > MAX_DIM {
            return Err(Error::DimensionMismatch(format!("joint dimension {joint} exceeds {MAX_DIM}")));
        }
        for m in [&system.constant_part, &h_env, &h_int] {
            let residual = m.hermiticity_residual();
            if residual > STRUCTURE_TOL {
                return Err(Error::NotHermitian { residual });
            }
        }
        Ok(Self { system, h_env, h_int })
    }

    /// A system with a trivial one-dimensional environment.
    pub fn isolated(system: TimeDependentHamiltonian) -> Self {
        let dim = system.dim();
        Self { system, h_env: ComplexMatrix::zeros(1), h_int: ComplexMatrix::zeros(dim) }
    }

    pub fn system(&self) -> &TimeDependentHamiltonian {
        &self.system
    }

    pub fn h_env(&self) -> &ComplexMatrix {
        &self.h_env
    }

    pub fn h_int(&self) -> &ComplexMatrix {
        &self.h_int
    }

    pub fn system_dim(&self) -> usize {
        self.system.dim()
    }

    pub fn env_dim(&self) -> usize {
        self.h_env.dim()
    }

    pub fn joint_dim(&self) -> usize {
        self.system_dim() * self.env_dim()
    }
}

/// Pieces of the joint Hamiltonian that do not change along the evolution.
struct JointParts {
    lifted_system: ComplexMatrix,
    static_part: ComplexMatrix,
}

impl JointParts {
    fn new(joint: &JointSystem) -> Self {
        let i_env = ComplexMatrix::identity(joint.env_dim());
        let i_sys = ComplexMatrix::identity(joint.system_dim());
        Self {
            lifted_system: joint.system.constant_part.kron(&i_env),
            static_part: &i_sys.kron(&joint.h_env) + &joint.h_int,
        }
    }

    fn at(&self, j: f64) -> ComplexMatrix {
        &self.lifted_system.scale_real(j) + &self.static_part
    }
}

fn check_interval(t0: f64, t1: f64) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidInterval { t0, t1 });
    }
    Ok(())
}

/// Propagator of `H(t) = J(t) A` from `t0` to `t1`.
///
/// `H` commutes with itself at all times, so the propagator is
/// `exp(-i (∫J) A)`; the envelope area is accumulated with `steps` midpoint
/// panels.
pub fn propagate(h: &TimeDependentHamiltonian, t0: f64, t1: f64, steps: usize) -> Result<ComplexMatrix> {
    check_interval(t0, t1)?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let area = h.envelope.area(t0, t1, steps);
    matexp_hermitian(&h.constant_part, area)
}

/// `exp(-i H (t1 - t0))` for a time-independent `H`.
pub fn propagate_constant(h: &ComplexMatrix, t0: f64, t1: f64) -> Result<ComplexMatrix> {
    check_interval(t0, t1)?;
    matexp_hermitian(h, t1 - t0)
}

/// Time-ordered joint propagator over `[t0, t1]` with midpoint
/// piecewise-constant steps. Constant envelopes make `ℋ` time independent,
/// in which case a single exponential is exact.
fn joint_segment(joint: &JointSystem, parts: &JointParts, t0: f64, t1: f64, steps: usize) -> Result<ComplexMatrix> {
    let env = &joint.system.envelope;
    if env.is_constant() {
        return matexp_hermitian(&parts.at(env.value(t0)), t1 - t0);
    }
    let dt = (t1 - t0) / steps as f64;
    let mut u = ComplexMatrix::identity(joint.joint_dim());
    for s in 0..steps {
        let mid = t0 + (s as f64 + 0.5) * dt;
        let step = matexp_hermitian(&parts.at(env.value(mid)), dt)?;
        u = &step * &u;
    }
    Ok(u)
}

/// Joint propagator with the decoupling schedule interleaved.
///
/// Interval `j` contributes `(P_j ⊗ I_E) U_j (P_j ⊗ I_E)` where `U_j` is the
/// time-ordered joint propagator over `[jτ, (j+1)τ]`; the system envelope
/// keeps running across all intervals.
pub fn evolve_with_dd(joint: &JointSystem, schedule: &PulseSchedule, steps_per_interval: usize) -> Result<ComplexMatrix> {
    if steps_per_interval == 0 {
        return Err(Error::InvalidArgument("steps per interval must be at least 1".into()));
    }
    if schedule.pulse_dim() != joint.system_dim() {
        return Err(Error::ScheduleMismatch(format!(
            "pulses act on dimension {}, system has dimension {}",
            schedule.pulse_dim(),
            joint.system_dim()
        )));
    }
    let big_t = joint.system.total_time();
    if (schedule.total_time() - big_t).abs() > 1e-9 * big_t.max(1.0) {
        return Err(Error::ScheduleMismatch(format!(
            "{} intervals of {} cover {}, but the gate runs for {big_t}",
            schedule.n_intervals(),
            schedule.tau(),
            schedule.total_time()
        )));
    }

    let parts = JointParts::new(joint);
    let i_env = ComplexMatrix::identity(joint.env_dim());
    let lifted: Vec<ComplexMatrix> = schedule.sequence().iter().map(|p| p.kron(&i_env)).collect();
    let tau = schedule.tau();
    let constant_segment = if joint.system.envelope.is_constant() {
        Some(joint_segment(joint, &parts, 0.0, tau, steps_per_interval)?)
    } else {
        None
    };

    let mut u = ComplexMatrix::identity(joint.joint_dim());
    for j in 0..schedule.n_intervals() {
        let seg = match &constant_segment {
            Some(seg) => seg.clone(),
            None => joint_segment(joint, &parts, j as f64 * tau, (j + 1) as f64 * tau, steps_per_interval)?,
        };
        let p = &lifted[j % lifted.len()];
        u = &(&(p * &seg) * p) * &u;
    }
    Ok(u)
}

/// Joint propagator over `[0, total_time]` without pulses.
///
/// `H_S(t)` and `H_I` need not commute, so the evolution is genuinely time
/// ordered: `steps` midpoint piecewise-constant factors.
pub fn evolve_without_dd(joint: &JointSystem, total_time: f64, steps: usize) -> Result<ComplexMatrix> {
    check_interval(0.0, total_time)?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    joint_segment(joint, &JointParts::new(joint), 0.0, total_time, steps)
}

/// Product of `gates` applied in order: the first gate acts first.
pub fn apply_gate_sequence(gates: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let first = gates
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty gate sequence".into()))?;
    gates[1..].iter().try_fold(first.clone(), |acc, g| g.matmul(&acc))
}
