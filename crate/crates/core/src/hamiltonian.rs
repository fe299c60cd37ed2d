//! XXZ Hamiltonian builders for the one- and two-logical-qubit gates, pulse
//! envelopes and logical encodings.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{basis_ket, ComplexMatrix, Ket};
use crate::operators::xxz_term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Constant,
    Sine,
}

/// Coupling envelope `J(t)` normalized to area `π` over `[0, T]`.
///
/// * constant: `J(t) = π / T`
/// * sine: `J(t) = (π² / 2T) sin(π t / T)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    pub total_time: f64,
}

impl Envelope {
    pub fn new(kind: EnvelopeKind, total_time: f64) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "envelope total time must be positive and finite, got {total_time}"
            )));
        }
        Ok(Self { kind, total_time })
    }

    pub fn constant(total_time: f64) -> Result<Self> {
        Self::new(EnvelopeKind::Constant, total_time)
    }

    pub fn sine(total_time: f64) -> Result<Self> {
        Self::new(EnvelopeKind::Sine, total_time)
    }

    pub fn is_constant(&self) -> bool {
        self.kind == EnvelopeKind::Constant
    }

    pub fn value(&self, t: f64) -> f64 {
        let big_t = self.total_time;
        match self.kind {
            EnvelopeKind::Constant => PI / big_t,
            EnvelopeKind::Sine => PI * PI / (2.0 * big_t) * (PI * t / big_t).sin(),
        }
    }

    /// Midpoint-rule estimate of `∫_{t0}^{t1} J(t) dt` with `steps` panels.
    pub fn area(&self, t0: f64, t1: f64, steps: usize) -> f64 {
        let steps = steps.max(1);
        if self.is_constant() {
            return self.value(t0) * (t1 - t0);
        }
        let dt = (t1 - t0) / steps as f64;
        (0..steps)
            .map(|i| self.value(t0 + (i as f64 + 0.5) * dt))
            .sum::<f64>()
            * dt
    }
}

impl Default for Envelope {
    fn default() -> Self {
        Self { kind: EnvelopeKind::Constant, total_time: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateParams1Q {
    pub theta1: f64,
    pub phi1: f64,
    pub envelope: Envelope,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateParams2Q {
    pub theta2: f64,
    pub phi2: f64,
    pub envelope: Envelope,
}

/// `H(t) = J(t) · A` for a fixed Hermitian operator `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeDependentHamiltonian {
    pub constant_part: ComplexMatrix,
    pub envelope: Envelope,
    /// Coefficient `c` of the identity-in-subspace term `-J(t) c Π` that is
    /// part of `A` but only contributes a global phase on the encoded
    /// subspace (`c = sin φ` for the gate Hamiltonians, zero otherwise).
    pub subspace_shift: f64,
}

impl TimeDependentHamiltonian {
    pub fn new(constant_part: ComplexMatrix, envelope: Envelope) -> Result<Self> {
        let residual = constant_part.hermiticity_residual();
        if residual > crate::linalg::STRUCTURE_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self { constant_part, envelope, subspace_shift: 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.constant_part.dim()
    }

    pub fn total_time(&self) -> f64 {
        self.envelope.total_time
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        self.constant_part.scale_real(self.envelope.value(t))
    }
}

/// XXZ coupling constants keyed by qubit pair, stored as `(min, max)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Couplings(BTreeMap<(usize, usize), (f64, f64)>);

impl Couplings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `(J^x, J^z)` for the unordered pair `{k, l}`.
    pub fn insert(&mut self, k: usize, l: usize, jx: f64, jz: f64) -> Result<()> {
        if k == l {
            return Err(Error::RequireKLessL { k, l });
        }
        self.0.insert((k.min(l), k.max(l)), (jx, jz));
        Ok(())
    }

    pub fn with(mut self, k: usize, l: usize, jx: f64, jz: f64) -> Result<Self> {
        self.insert(k, l, jx, jz)?;
        Ok(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &(f64, f64))> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `Σ_{k<l} J^x_kl (XX + YY)_kl + J^z_kl (ZZ)_kl`
pub fn build_xxz(couplings: &Couplings, n: usize) -> Result<ComplexMatrix> {
    let mut h = ComplexMatrix::zeros(1 << n);
    for (&(k, l), &(jx, jz)) in couplings.iter() {
        h += &xxz_term(k, l, jx, jz, n)?;
    }
    Ok(h)
}

/// One-logical-qubit gate Hamiltonian on three physical qubits.
pub fn build_h1(params: &GateParams1Q) -> TimeDependentHamiltonian {
    let (theta, phi) = (params.theta1, params.phi1);
    let couplings = Couplings::new()
        .with(1, 2, -0.5 * phi.cos() * (theta / 2.0).cos(), 0.0)
        .and_then(|c| c.with(1, 3, 0.5 * phi.cos() * (theta / 2.0).sin(), 0.0))
        .and_then(|c| c.with(2, 3, 0.0, phi.sin()))
        .expect("static pair indices");
    let a = build_xxz(&couplings, 3).expect("static pair indices");
    TimeDependentHamiltonian { constant_part: a, envelope: params.envelope, subspace_shift: phi.sin() }
}

/// Two-logical-qubit gate Hamiltonian on six physical qubits.
pub fn build_h2(params: &GateParams2Q) -> TimeDependentHamiltonian {
    let (theta, phi) = (params.theta2, params.phi2);
    let couplings = Couplings::new()
        .with(2, 5, -0.5 * phi.cos() * (theta / 2.0).cos(), 0.0)
        .and_then(|c| c.with(2, 6, 0.5 * phi.cos() * (theta / 2.0).sin(), 0.0))
        .and_then(|c| c.with(2, 3, 0.0, phi.sin()))
        .expect("static pair indices");
    let a = build_xxz(&couplings, 6).expect("static pair indices");
    TimeDependentHamiltonian { constant_part: a, envelope: params.envelope, subspace_shift: phi.sin() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    OneQubit,
    TwoQubit,
}

/// Logical and auxiliary kets as computational-basis indices of the physical
/// register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalEncoding {
    pub kind: EncodingKind,
    pub n_qubits: usize,
    pub logical: Vec<(String, usize)>,
    pub auxiliary: Vec<(String, usize)>,
}

fn bits(s: &str) -> usize {
    usize::from_str_radix(s, 2).expect("binary literal")
}

impl LogicalEncoding {
    /// `|0>_L = |001>`, `|1>_L = |010>`, auxiliary `|a> = |100>`.
    pub fn one_qubit() -> Self {
        Self {
            kind: EncodingKind::OneQubit,
            n_qubits: 3,
            logical: vec![("0".into(), bits("001")), ("1".into(), bits("010"))],
            auxiliary: vec![("a".into(), bits("100"))],
        }
    }

    /// Two logical qubits on six physical qubits, auxiliaries
    /// `|a1> = |011000>` and `|a2> = |000011>`.
    pub fn two_qubit() -> Self {
        Self {
            kind: EncodingKind::TwoQubit,
            n_qubits: 6,
            logical: vec![
                ("00".into(), bits("001001")),
                ("01".into(), bits("001010")),
                ("10".into(), bits("010001")),
                ("11".into(), bits("010010")),
            ],
            auxiliary: vec![("a1".into(), bits("011000")), ("a2".into(), bits("000011"))],
        }
    }

    pub fn for_kind(kind: EncodingKind) -> Self {
        match kind {
            EncodingKind::OneQubit => Self::one_qubit(),
            EncodingKind::TwoQubit => Self::two_qubit(),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn logical_dim(&self) -> usize {
        self.logical.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.logical
            .iter()
            .chain(self.auxiliary.iter())
            .find(|(l, _)| l == label)
            .map(|&(_, idx)| idx)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn logical_kets(&self) -> Vec<Ket> {
        self.logical.iter().map(|&(_, i)| basis_ket(self.dim(), i)).collect()
    }

    /// Logical kets followed by the auxiliary kets.
    pub fn subspace_kets(&self) -> Vec<Ket> {
        self.logical
            .iter()
            .chain(self.auxiliary.iter())
            .map(|&(_, i)| basis_ket(self.dim(), i))
            .collect()
    }

    /// Embeds a logical-space vector into the physical register.
    pub fn embed(&self, logical: &Ket) -> Ket {
        assert_eq!(logical.len(), self.logical_dim(), "logical vector length");
        let mut out = Ket::zeros(self.dim());
        for (amp, &(_, idx)) in logical.iter().zip(&self.logical) {
            out[idx] = *amp;
        }
        out
    }
}

pub fn encoded_state(encoding: &LogicalEncoding, label: &str) -> Result<Ket> {
    Ok(basis_ket(encoding.dim(), encoding.index_of(label)?))
}
