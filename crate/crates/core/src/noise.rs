//! Seeded environment models: bath Hamiltonian `H_E`, bath operators
//! `B^α_k` and the system–bath interaction `H_I = Σ_{k,α} σ^α_k ⊗ B^α_k`.
//!
//! Every qubit couples to one shared bath factor of dimension `d_E`. Random
//! Hermitian matrices are drawn as `(G + G†)/2` with standard complex normal
//! `G` and rescaled to a fixed operator norm.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::operators::{pauli_on, PauliAxis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseVariant {
    /// Independent `B^α_k` for every qubit and axis.
    #[default]
    Independent,
    /// `B^α_k = B^α` for all `k`.
    Collective,
    /// Only `α = z` couples; independent per qubit.
    Dephasing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pub env_dim: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub seed: u64,
    pub variant: NoiseVariant,
    pub n_qubits: usize,
    /// Nonzero bath operators keyed by (1-based qubit, axis).
    pub bath_ops: BTreeMap<(usize, PauliAxis), ComplexMatrix>,
    pub h_env: ComplexMatrix,
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize, norm: f64) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64(re, im)
    });
    let h = (&g + &g.dagger()).scale_real(0.5);
    let current = h.op_norm();
    if norm == 0.0 || current == 0.0 {
        ComplexMatrix::zeros(dim)
    } else {
        h.scale_real(norm / current)
    }
}

/// Draws a noise model. The same arguments always reproduce the same model
/// bit for bit.
pub fn sample_noise(
    seed: u64,
    n_qubits: usize,
    env_dim: usize,
    epsilon: f64,
    eta: f64,
    variant: NoiseVariant,
) -> Result<NoiseModel> {
    if env_dim == 0 {
        return Err(Error::InvalidArgument("bath dimension must be at least 1".into()));
    }
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("noise model needs at least one qubit".into()));
    }
    for (name, v) in [("epsilon", epsilon), ("eta", eta)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {v}")));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_env = random_hermitian(&mut rng, env_dim, eta);
    let mut bath_ops = BTreeMap::new();
    match variant {
        NoiseVariant::Independent => {
            for k in 1..=n_qubits {
                for axis in PauliAxis::XYZ {
                    bath_ops.insert((k, axis), random_hermitian(&mut rng, env_dim, epsilon));
                }
            }
        }
        NoiseVariant::Collective => {
            for axis in PauliAxis::XYZ {
                let b = random_hermitian(&mut rng, env_dim, epsilon);
                for k in 1..=n_qubits {
                    bath_ops.insert((k, axis), b.clone());
                }
            }
        }
        NoiseVariant::Dephasing => {
            for k in 1..=n_qubits {
                bath_ops.insert((k, PauliAxis::Z), random_hermitian(&mut rng, env_dim, epsilon));
            }
        }
    }
    Ok(NoiseModel { env_dim, epsilon, eta, seed, variant, n_qubits, bath_ops, h_env })
}

/// `Σ_{k,α} σ^α_k ⊗ B^α_k` on the joint space (system factor on the left).
pub fn build_interaction(model: &NoiseModel, n_qubits: usize) -> Result<ComplexMatrix> {
    if n_qubits != model.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "noise model was sampled for {} qubits, system has {n_qubits}",
            model.n_qubits
        )));
    }
    let mut h = ComplexMatrix::zeros((1 << n_qubits) * model.env_dim);
    for (&(k, axis), b) in &model.bath_ops {
        if b.dim() != model.env_dim {
            return Err(Error::DimensionMismatch(format!(
                "bath operator for qubit {k} axis {axis} has dimension {}",
                b.dim()
            )));
        }
        h += &pauli_on(axis, k, n_qubits)?.kron(b);
    }
    Ok(h)
}

/// `Σ_α (⊗σ^α ⊗ I) H (⊗σ^α ⊗ I) + H`; vanishes for any interaction linear in
/// single-qubit Paulis.
pub fn decoupling_average(h_int: &ComplexMatrix, n_qubits: usize, env_dim: usize) -> ComplexMatrix {
    let i_env = ComplexMatrix::identity(env_dim);
    let mut acc = h_int.clone();
    for axis in PauliAxis::XYZ {
        let p = crate::operators::collective_pauli(axis, n_qubits).kron(&i_env);
        acc += &(&(&p * h_int) * &p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::collective_pauli;

    use proptest::prelude::*;

    const VARIANTS: [NoiseVariant; 3] = [NoiseVariant::Independent, NoiseVariant::Collective, NoiseVariant::Dephasing];

    #[test]
    fn zero_coupling_gives_zero_interaction() {
        for v in VARIANTS {
            let m = sample_noise(1, 3, 4, 0.0, 0.3, v).unwrap();
            assert_eq!(build_interaction(&m, 3).unwrap(), ComplexMatrix::zeros(32));
        }
    }

    #[test]
    fn collective_ops_are_shared() {
        let m = sample_noise(2, 6, 3, 0.2, 0.1, NoiseVariant::Collective).unwrap();
        for axis in PauliAxis::XYZ {
            for k in 2..=6 {
                assert_eq!(m.bath_ops[&(1, axis)], m.bath_ops[&(k, axis)]);
            }
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        for v in VARIANTS {
            let a = sample_noise(99, 3, 4, 0.15, 0.3, v).unwrap();
            let b = sample_noise(99, 3, 4, 0.15, 0.3, v).unwrap();
            assert_eq!(a, b);
            let ha = build_interaction(&a, 3).unwrap();
            let hb = build_interaction(&b, 3).unwrap();
            let bits = |m: &ComplexMatrix| m.as_dmatrix().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect::<Vec<_>>();
            assert_eq!(bits(&ha), bits(&hb));
        }
        let c = sample_noise(100, 3, 4, 0.15, 0.3, NoiseVariant::Independent).unwrap();
        assert_ne!(c, sample_noise(99, 3, 4, 0.15, 0.3, NoiseVariant::Independent).unwrap());
    }

    #[test]
    fn norms_match_requested_strengths() {
        let m = sample_noise(5, 3, 4, 0.07, 0.2, NoiseVariant::Independent).unwrap();
        assert_eq!(m.bath_ops.len(), 9);
        for b in m.bath_ops.values() {
            assert!(b.is_hermitian(1e-15));
            assert!((b.op_norm() - 0.07).abs() < 1e-12);
        }
        assert!((m.h_env.op_norm() - 0.2).abs() < 1e-12);
        let h = build_interaction(&m, 3).unwrap();
        assert!(h.is_hermitian(1e-14));
        assert!(h.op_norm() <= 9.0 * 0.07 + 1e-12);
    }

    #[test]
    fn single_qubit_dephasing() {
        let m = sample_noise(7, 1, 2, 0.5, 0.0, NoiseVariant::Dephasing).unwrap();
        let h = build_interaction(&m, 1).unwrap();
        let expected = PauliAxis::Z.matrix().kron(&m.bath_ops[&(1, PauliAxis::Z)]);
        assert_eq!(h, expected);
    }

    #[test]
    fn dephasing_commutes_with_collective_z() {
        let m = sample_noise(8, 3, 4, 0.3, 0.0, NoiseVariant::Dephasing).unwrap();
        let h = build_interaction(&m, 3).unwrap();
        let z = collective_pauli(PauliAxis::Z, 3).kron(&ComplexMatrix::identity(4));
        assert!(h.commutator(&z).max_abs() <= 1e-13);
    }

    #[test]
    fn interaction_dimension_mismatch() {
        let m = sample_noise(8, 3, 4, 0.3, 0.0, NoiseVariant::Independent).unwrap();
        assert!(matches!(build_interaction(&m, 6), Err(Error::DimensionMismatch(_))));
        assert!(sample_noise(1, 3, 0, 0.1, 0.1, NoiseVariant::Independent).is_err());
    }

    /// Explicit conjugation sum, written out independently of
    /// `decoupling_average`.
    fn conjugation_sum(h: &ComplexMatrix, n: usize, d: usize) -> ComplexMatrix {
        let mut acc = h.clone();
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            let mut p = ComplexMatrix::identity(1);
            for _ in 0..n {
                p = p.kron(&axis.matrix());
            }
            let p = p.kron(&ComplexMatrix::identity(d));
            acc = acc + p.matmul(h).unwrap().matmul(&p).unwrap();
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn triple_conjugation_cancels_interaction(seed in any::<u64>(), six in any::<bool>(), v in 0usize..3) {
            let n = if six { 6 } else { 3 };
            let d = if six { 2 } else { 4 };
            let m = sample_noise(seed, n, d, 0.05 * std::f64::consts::PI, 0.1, VARIANTS[v]).unwrap();
            let h = build_interaction(&m, n).unwrap();
            prop_assert!(conjugation_sum(&h, n, d).max_abs() <= 1e-12);
            prop_assert!(decoupling_average(&h, n, d).max_abs() <= 1e-12);
            prop_assert!(h.op_norm() <= 3.0 * n as f64 * m.epsilon + 1e-12);
        }
    }
}
