//! Holonomy conditions, logical gate extraction, closed-form target gates and
//! gate-quality metrics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::propagate;
use crate::hamiltonian::{EncodingKind, LogicalEncoding, TimeDependentHamiltonian};
use crate::linalg::{basis_ket, c64, partial_trace, ComplexMatrix, Ket};
use crate::operators::PauliAxis;

/// Unitarity tolerance for gate extraction from simulated propagators.
pub const EXTRACTION_UNITARITY_TOL: f64 = 1e-8;

/// Relative tolerance for ties when picking the phase reference element.
const PHASE_TIE_TOL: f64 = 1e-8;

/// Rotation angle `γ = -(π + π sin φ)` of the holonomic gates.
pub fn gamma(phi: f64) -> f64 {
    -(PI + PI * phi.sin())
}

/// `(|d>, |b>)` in the logical basis: `|d> = cos(θ/2)|0> + sin(θ/2)|1>`,
/// `|b> = sin(θ/2)|0> - cos(θ/2)|1>`.
pub fn dark_bright(theta: f64) -> (Ket, Ket) {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    (Ket::from_vec(vec![c64(c, 0.0), c64(s, 0.0)]), Ket::from_vec(vec![c64(s, 0.0), c64(-c, 0.0)]))
}

/// `exp(-i angle (n · σ) / 2)` for a unit vector `n`.
pub fn axis_rotation(n: [f64; 3], angle: f64) -> ComplexMatrix {
    let (s, c) = ((angle / 2.0).sin(), (angle / 2.0).cos());
    let ns = &(&PauliAxis::X.matrix().scale_real(n[0]) + &PauliAxis::Y.matrix().scale_real(n[1]))
        + &PauliAxis::Z.matrix().scale_real(n[2]);
    &ComplexMatrix::identity(2).scale_real(c) - &ns.scale(c64(0.0, s))
}

pub fn rx(angle: f64) -> ComplexMatrix {
    axis_rotation([1.0, 0.0, 0.0], angle)
}

pub fn rz(angle: f64) -> ComplexMatrix {
    axis_rotation([0.0, 0.0, 1.0], angle)
}

/// One-qubit holonomic gate `|d><d| + e^{iγ}|b><b|`.
pub fn analytic_u1(theta1: f64, phi1: f64) -> ComplexMatrix {
    let (d, b) = dark_bright(theta1);
    let phase = Complex64::from_polar(1.0, gamma(phi1));
    &ComplexMatrix::outer(&d, &d) + &ComplexMatrix::outer(&b, &b).scale(phase)
}

/// Rotation form `e^{iγ/2} exp(-iγ (sinθ X + cosθ Z)/2)` of the one-qubit gate.
pub fn u1_rotation_form(theta1: f64, phi1: f64) -> ComplexMatrix {
    let g = gamma(phi1);
    axis_rotation([theta1.sin(), 0.0, theta1.cos()], g).scale(Complex64::from_polar(1.0, g / 2.0))
}

/// `(|d1>, |b1>, |d2>, |b2>)` in the two-qubit logical basis.
pub fn two_qubit_dark_bright(theta2: f64) -> [Ket; 4] {
    let (s, c) = ((theta2 / 2.0).sin(), (theta2 / 2.0).cos());
    let v = |a: [f64; 4]| Ket::from_iterator(4, a.iter().map(|&x| c64(x, 0.0)));
    [v([c, s, 0.0, 0.0]), v([s, -c, 0.0, 0.0]), v([0.0, 0.0, s, c]), v([0.0, 0.0, c, -s])]
}

/// Two-qubit holonomic gate in projector form.
pub fn analytic_u2(theta2: f64, phi2: f64) -> ComplexMatrix {
    let [d1, b1, d2, b2] = two_qubit_dark_bright(theta2);
    let phase = Complex64::from_polar(1.0, gamma(phi2));
    let dark = &ComplexMatrix::outer(&d1, &d1) + &ComplexMatrix::outer(&d2, &d2);
    let bright = &ComplexMatrix::outer(&b1, &b1) + &ComplexMatrix::outer(&b2, &b2);
    &dark + &bright.scale(phase)
}

/// Controlled form `|0><0| ⊗ R_{n+}(γ) + |1><1| ⊗ R_{n-}(γ)` with
/// `n± = (sinθ, 0, ±cosθ)`; equals [`analytic_u2`] up to a global phase.
pub fn u2_controlled_form(theta2: f64, phi2: f64) -> ComplexMatrix {
    let g = gamma(phi2);
    let p0 = ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
    let p1 = ComplexMatrix::from_diagonal(&[c64(0.0, 0.0), c64(1.0, 0.0)]);
    let upper = axis_rotation([theta2.sin(), 0.0, theta2.cos()], g);
    let lower = axis_rotation([theta2.sin(), 0.0, -theta2.cos()], g);
    &p0.kron(&upper) + &p1.kron(&lower)
}

/// Multiplies `m` by `e^{-i arg(m_ref)}` where `m_ref` is the first entry
/// (row-major) whose modulus is within a relative `1e-8` of the largest.
pub fn normalize_global_phase(m: &ComplexMatrix) -> ComplexMatrix {
    let largest = m.max_abs();
    if largest == 0.0 {
        return m.clone();
    }
    let n = m.dim();
    let reference = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|idx| m[idx])
        .find(|z| z.norm() >= largest * (1.0 - PHASE_TIE_TOL))
        .expect("largest element exists");
    m.scale(reference.conj() / reference.norm())
}

/// Cyclic-evolution residual `‖Σ|φ_k(τ)><φ_k(τ)| - Σ|φ_k(0)><φ_k(0)|‖_op`.
pub fn check_cyclic(u_final: &ComplexMatrix, logical_kets: &[Ket]) -> f64 {
    let evolved: Vec<Ket> = logical_kets.iter().map(|k| u_final.apply(k)).collect();
    (&ComplexMatrix::projector(&evolved) - &ComplexMatrix::projector(logical_kets)).op_norm()
}

/// Evenly spaced sample times over `[0, T]`, endpoints included.
fn sample_times(total_time: f64, n_samples: usize) -> impl Iterator<Item = f64> {
    (0..n_samples).map(move |i| total_time * i as f64 / (n_samples - 1) as f64)
}

/// Midpoint panels used when a sampled propagator is needed.
const SAMPLE_STEPS: usize = 2000;

/// Parallel-transport residual `max_t max_{k,l} |<φ_k(t)|H̃(t)|φ_l(t)>|`.
///
/// `H̃ = H + J(t) c Π` restores the identity-in-subspace term (`c` is
/// [`TimeDependentHamiltonian::subspace_shift`], `Π` projects onto the
/// logical and auxiliary kets) that the physical Hamiltonian carries but
/// which only contributes a global phase. For `c = 0` the check runs on `H`
/// directly.
pub fn check_parallel_transport(
    h: &TimeDependentHamiltonian,
    encoding: &LogicalEncoding,
    n_samples: usize,
) -> Result<f64> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("need at least two sample times".into()));
    }
    if h.dim() != encoding.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian has dimension {}, encoding {}",
            h.dim(),
            encoding.dim()
        )));
    }
    let pi_sub = ComplexMatrix::projector(&encoding.subspace_kets());
    let gauged = &h.constant_part + &pi_sub.scale_real(h.subspace_shift);
    let kets = encoding.logical_kets();
    let mut worst: f64 = 0.0;
    for t in sample_times(h.total_time(), n_samples) {
        let u = if t > 0.0 { propagate(h, 0.0, t, SAMPLE_STEPS)? } else { ComplexMatrix::identity(h.dim()) };
        let evolved: Vec<Ket> = kets.iter().map(|k| u.apply(k)).collect();
        let block = gauged.project(&evolved).scale_real(h.envelope.value(t));
        worst = worst.max(block.max_abs());
    }
    Ok(worst)
}

/// Smallest logical-subspace population over sampled interior times and
/// logical basis inputs.
pub fn min_logical_population(h: &TimeDependentHamiltonian, encoding: &LogicalEncoding, n_samples: usize) -> Result<f64> {
    let kets = encoding.logical_kets();
    let mut lowest: f64 = 1.0;
    for i in 1..=n_samples {
        let t = h.total_time() * i as f64 / (n_samples + 1) as f64;
        let u = propagate(h, 0.0, t, SAMPLE_STEPS)?;
        for k in &kets {
            let out = u.apply(k);
            let pop: f64 = kets.iter().map(|l| l.dotc(&out).norm_sqr()).sum();
            lowest = lowest.min(pop);
        }
    }
    Ok(lowest)
}

/// Logical block `<i_L|u|j_L>` (phase-normalized) and leakage
/// `1 - min_j ‖Π_L u |j_L>‖²`.
pub fn extract_logical_gate(u: &ComplexMatrix, encoding: &LogicalEncoding) -> Result<(ComplexMatrix, f64)> {
    if u.dim() != encoding.dim() {
        return Err(Error::DimensionMismatch(format!(
            "propagator has dimension {}, encoding {}",
            u.dim(),
            encoding.dim()
        )));
    }
    let residual = u.unitarity_residual();
    if residual > EXTRACTION_UNITARITY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let kets = encoding.logical_kets();
    let block = u.project(&kets);
    let n = block.dim();
    let retained = (0..n)
        .map(|j| (0..n).map(|i| block[(i, j)].norm_sqr()).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    Ok((normalize_global_phase(&block), 1.0 - retained))
}

/// `|Tr(target† actual)| / d`
pub fn gate_fidelity(actual: &ComplexMatrix, target: &ComplexMatrix) -> Result<f64> {
    if actual.dim() != target.dim() {
        return Err(Error::DimensionMismatch(format!(
            "gate of dimension {} compared against {}",
            actual.dim(),
            target.dim()
        )));
    }
    Ok((target.dagger() * actual.clone()).trace().norm() / actual.dim() as f64)
}

/// Singular values of the realigned matrix `R[(i1 j1), (i2 j2)] = U[(i1 i2), (j1 j2)]`
/// across the 2 ⊗ 2 split, in descending order.
pub fn operator_schmidt_values(gate4: &ComplexMatrix) -> Result<Vec<f64>> {
    if gate4.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("expected a 4x4 gate, got {0}x{0}", gate4.dim())));
    }
    let realigned = ComplexMatrix::from_fn(4, |row, col| {
        let (i1, j1) = (row / 2, row % 2);
        let (i2, j2) = (col / 2, col % 2);
        gate4[(2 * i1 + i2, 2 * j1 + j2)]
    });
    let mut values = realigned.singular_values();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Operator-Schmidt rank; 1 exactly for product gates.
pub fn entangling_check(gate4: &ComplexMatrix) -> Result<usize> {
    Ok(operator_schmidt_values(gate4)?.iter().filter(|&&s| s > 1e-10).count())
}

/// Closed-form target gate for an encoding.
pub fn analytic_target(kind: EncodingKind, theta: f64, phi: f64) -> ComplexMatrix {
    match kind {
        EncodingKind::OneQubit => analytic_u1(theta, phi),
        EncodingKind::TwoQubit => analytic_u2(theta, phi),
    }
}

/// Realized rotation angle: relative phase between the bright and dark
/// eigen-directions of the extracted gate, unwrapped toward `γ(φ)`.
pub fn realized_gamma(gate: &ComplexMatrix, kind: EncodingKind, theta: f64, phi: f64) -> f64 {
    let (d, b) = match kind {
        EncodingKind::OneQubit => dark_bright(theta),
        EncodingKind::TwoQubit => {
            let [d1, b1, _, _] = two_qubit_dark_bright(theta);
            (d1, b1)
        }
    };
    let ratio = gate.sandwich(&b, &b) / gate.sandwich(&d, &d);
    let target = gamma(phi);
    let mut delta = ratio.arg() - target;
    delta -= 2.0 * PI * (delta / (2.0 * PI)).round();
    target + delta
}

/// Quality of one simulated holonomic gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub logical_gate: ComplexMatrix,
    pub target_gate: ComplexMatrix,
    pub leakage: f64,
    pub fidelity: f64,
    pub cyclic_residual: f64,
    pub pt_residual: f64,
    pub gamma: f64,
    pub gamma_target: f64,
}

/// Full closed-system analysis of a gate Hamiltonian over `[0, T]`.
pub fn closed_system_report(
    h: &TimeDependentHamiltonian,
    encoding: &LogicalEncoding,
    theta: f64,
    phi: f64,
    steps: usize,
    pt_samples: usize,
) -> Result<GateReport> {
    let u = propagate(h, 0.0, h.total_time(), steps)?;
    let (gate, leakage) = extract_logical_gate(&u, encoding)?;
    let target = analytic_target(encoding.kind, theta, phi);
    Ok(GateReport {
        fidelity: gate_fidelity(&gate, &target)?,
        cyclic_residual: check_cyclic(&u, &encoding.logical_kets()),
        pt_residual: check_parallel_transport(h, encoding, pt_samples)?,
        gamma: realized_gamma(&gate, encoding.kind, theta, phi),
        gamma_target: gamma(phi),
        target_gate: normalize_global_phase(&target),
        logical_gate: gate,
        leakage,
    })
}

/// Seeded normalized complex-Gaussian states of dimension `dim`.
pub fn random_logical_states(seed: u64, count: usize, dim: usize) -> Vec<Ket> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..count)
        .map(|_| {
            let v = Ket::from_fn(dim, |_, _| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                c64(re, im)
            });
            let norm = v.norm();
            v / c64(norm, 0.0)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOutcome {
    /// Mean `<ψ_target|ρ_S|ψ_target>` over the input ensemble.
    pub fidelity: f64,
    /// Mean population outside the logical subspace.
    pub leakage: f64,
}

impl EnsembleOutcome {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.fidelity
    }
}

/// Evolves `|ψ_L> ⊗ |e_b>` with the joint propagator, traces out the bath
/// and compares with `target |ψ_L>` for every state in `states`.
pub fn ensemble_fidelity(
    u_joint: &ComplexMatrix,
    encoding: &LogicalEncoding,
    target: &ComplexMatrix,
    env_dim: usize,
    bath_initial: usize,
    states: &[Ket],
) -> Result<EnsembleOutcome> {
    if u_joint.dim() != encoding.dim() * env_dim {
        return Err(Error::DimensionMismatch(format!(
            "joint propagator has dimension {}, expected {} x {env_dim}",
            u_joint.dim(),
            encoding.dim()
        )));
    }
    if bath_initial >= env_dim {
        return Err(Error::InvalidArgument(format!(
            "bath initial state {bath_initial} outside a {env_dim}-dim bath"
        )));
    }
    if states.is_empty() {
        return Err(Error::InvalidArgument("empty input ensemble".into()));
    }
    let bath = basis_ket(env_dim, bath_initial);
    let logical_idx: Vec<usize> = encoding.logical.iter().map(|&(_, i)| i).collect();
    let mut fid = 0.0;
    let mut leak = 0.0;
    for psi in states {
        let initial = encoding.embed(psi).kronecker(&bath);
        let out = u_joint.apply(&initial);
        let rho = partial_trace(&ComplexMatrix::outer(&out, &out), &[encoding.dim(), env_dim], &[0])?;
        let expected = encoding.embed(&target.apply(psi));
        fid += rho.sandwich(&expected, &expected).re;
        leak += 1.0 - logical_idx.iter().map(|&i| rho[(i, i)].re).sum::<f64>();
    }
    let n = states.len() as f64;
    Ok(EnsembleOutcome { fidelity: fid / n, leakage: leak / n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_h1, build_h2, Envelope, GateParams1Q, GateParams2Q};
    use crate::linalg::phase_aligned_distance;

    use rand::Rng;

    fn h1(theta: f64, phi: f64) -> TimeDependentHamiltonian {
        build_h1(&GateParams1Q { theta1: theta, phi1: phi, envelope: Envelope::default() })
    }

    fn h2(theta: f64, phi: f64) -> TimeDependentHamiltonian {
        build_h2(&GateParams2Q { theta2: theta, phi2: phi, envelope: Envelope::default() })
    }

    fn x() -> ComplexMatrix {
        PauliAxis::X.matrix()
    }

    #[test]
    fn cyclic_residual_cases() {
        let enc = LogicalEncoding::one_qubit();
        assert_eq!(check_cyclic(&ComplexMatrix::identity(8), &enc.logical_kets()), 0.0);

        let h = h1(0.8, 0.4);
        let full = propagate(&h, 0.0, 1.0, 1).unwrap();
        assert!(check_cyclic(&full, &enc.logical_kets()) <= 1e-12);

        let half = propagate(&h1(PI / 2.0, 0.0), 0.0, 0.5, 1).unwrap();
        assert!(check_cyclic(&half, &enc.logical_kets()) > 0.1);
    }

    #[test]
    fn parallel_transport_without_shift() {
        let enc = LogicalEncoding::one_qubit();
        let r = check_parallel_transport(&h1(1.3, 0.0), &enc, 100).unwrap();
        assert!(r <= 1e-10, "{r:e}");
    }

    #[test]
    fn parallel_transport_with_shift() {
        let enc = LogicalEncoding::one_qubit();
        let h = h1(0.4, 1.1);
        assert!(check_parallel_transport(&h, &enc, 100).unwrap() <= 1e-10);
        // without the gauge shift the residual is the dropped |J sinφ| term
        let mut raw = h.clone();
        raw.subspace_shift = 0.0;
        let r = check_parallel_transport(&raw, &enc, 20).unwrap();
        assert!((r - PI * 1.1f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn parallel_transport_negative_control() {
        let enc = LogicalEncoding::one_qubit();
        let mut h = h1(0.7, 0.3);
        let k = enc.logical_kets();
        let coupling = &ComplexMatrix::outer(&k[0], &k[1]) + &ComplexMatrix::outer(&k[1], &k[0]);
        h.constant_part = &h.constant_part + &coupling.scale_real(0.1);
        assert!(check_parallel_transport(&h, &enc, 50).unwrap() > 1e-3);
        assert!(check_parallel_transport(&h, &enc, 1).is_err());
    }

    #[test]
    fn extraction_of_identity() {
        let enc = LogicalEncoding::one_qubit();
        let (g, leak) = extract_logical_gate(&ComplexMatrix::identity(8), &enc).unwrap();
        assert_eq!(g, ComplexMatrix::identity(2));
        assert!(leak.abs() < 1e-15);
        let not_unitary = ComplexMatrix::identity(8).scale_real(0.5);
        assert!(matches!(extract_logical_gate(&not_unitary, &enc), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn x_axis_gate_from_simulation() {
        let enc = LogicalEncoding::one_qubit();
        let u = propagate(&h1(PI / 2.0, 0.0), 0.0, 1.0, 1).unwrap();
        let (g, leak) = extract_logical_gate(&u, &enc).unwrap();
        assert!(leak <= 1e-8);
        assert!(phase_aligned_distance(&g, &x()) <= 1e-10);
    }

    #[test]
    fn z_axis_gate_from_simulation() {
        let enc = LogicalEncoding::one_qubit();
        let phi = 0.35;
        let u = propagate(&h1(0.0, phi), 0.0, 1.0, 1).unwrap();
        let (g, _) = extract_logical_gate(&u, &enc).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), Complex64::from_polar(1.0, gamma(phi))]);
        assert!(g[(0, 1)].norm() < 1e-12 && g[(1, 0)].norm() < 1e-12);
        assert!(phase_aligned_distance(&g, &expected) <= 1e-10);
    }

    #[test]
    fn analytic_u1_special_cases() {
        assert!((&analytic_u1(0.9, -PI / 2.0) - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
        let g = analytic_u1(PI / 2.0, 0.0);
        // γ = -π gives |d><d| - |b><b| = X exactly
        assert!((&g - &x()).max_abs() < 1e-14);
    }

    #[test]
    fn u1_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let (t, p) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            assert!((&analytic_u1(t, p) - &u1_rotation_form(t, p)).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn u1_dark_state_has_unit_eigenvalue() {
        let (theta, phi) = (1.1, 0.2);
        let u = analytic_u1(theta, phi);
        let (d, b) = dark_bright(theta);
        assert!((u.apply(&d) - &d).norm() < 1e-14);
        assert!((u.apply(&b) - &b * Complex64::from_polar(1.0, gamma(phi))).norm() < 1e-14);
    }

    #[test]
    fn analytic_u2_special_cases() {
        assert!((&analytic_u2(0.4, -PI / 2.0) - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
        let phi = 0.6;
        let g = gamma(phi);
        let p0 = ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
        let p1 = ComplexMatrix::from_diagonal(&[c64(0.0, 0.0), c64(1.0, 0.0)]);
        let expected = &p0.kron(&rz(g)) + &p1.kron(&rz(-g));
        assert!(phase_aligned_distance(&analytic_u2(0.0, phi), &expected) <= 1e-12);
    }

    #[test]
    fn u2_forms_agree_after_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..50 {
            let (t, p) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            let a = normalize_global_phase(&analytic_u2(t, p));
            let b = normalize_global_phase(&u2_controlled_form(t, p));
            assert!((&a - &b).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn fidelity_cases() {
        let u = analytic_u1(0.3, 0.8);
        assert!((gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(gate_fidelity(&ComplexMatrix::identity(2), &x()).unwrap(), 0.0);
        assert!(gate_fidelity(&ComplexMatrix::identity(2), &ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn schmidt_rank_cases() {
        assert_eq!(entangling_check(&ComplexMatrix::identity(4)).unwrap(), 1);
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let cnot = ComplexMatrix::from_rows(&[
            vec![one, zero, zero, zero],
            vec![zero, one, zero, zero],
            vec![zero, zero, zero, one],
            vec![zero, zero, one, zero],
        ])
        .unwrap();
        assert_eq!(entangling_check(&cnot).unwrap(), 2);
        assert_eq!(entangling_check(&rx(0.4).kron(&rz(1.3))).unwrap(), 1);
        assert!(entangling_check(&analytic_u2(0.9, 0.0)).unwrap() >= 2);
        assert!(entangling_check(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn two_qubit_closed_system_gate() {
        let enc = LogicalEncoding::two_qubit();
        let (theta, phi) = (1.1, -0.4);
        let report = closed_system_report(&h2(theta, phi), &enc, theta, phi, 1, 30).unwrap();
        assert!(report.fidelity >= 1.0 - 1e-10);
        assert!(report.leakage <= 1e-10);
        assert!(report.cyclic_residual <= 1e-10);
        assert!(report.pt_residual <= 1e-9);
        assert!((report.gamma - gamma(phi)).abs() < 1e-8);
    }

    #[test]
    fn mid_evolution_leaves_subspace() {
        let enc = LogicalEncoding::one_qubit();
        assert!(min_logical_population(&h1(0.9, 0.3), &enc, 25).unwrap() < 0.99);
    }

    #[test]
    fn normalization_picks_first_largest() {
        let m = ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.5), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.2, 0.0)],
        ])
        .unwrap();
        let n = normalize_global_phase(&m);
        assert!((n[(0, 1)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((n[(1, 0)] - c64(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ensemble_fidelity_of_ideal_gate_is_one() {
        let enc = LogicalEncoding::one_qubit();
        let (theta, phi) = (0.6, 0.2);
        let u = propagate(&h1(theta, phi), 0.0, 1.0, 1).unwrap().kron(&ComplexMatrix::identity(3));
        let states = random_logical_states(4, 20, 2);
        let out = ensemble_fidelity(&u, &enc, &analytic_u1(theta, phi), 3, 0, &states).unwrap();
        assert!((out.fidelity - 1.0).abs() < 1e-12);
        assert!(out.leakage.abs() < 1e-12);
        assert!(ensemble_fidelity(&u, &enc, &analytic_u1(theta, phi), 3, 3, &states).is_err());
    }

    #[test]
    fn random_states_are_seeded_and_normalized() {
        let a = random_logical_states(9, 5, 4);
        assert_eq!(a, random_logical_states(9, 5, 4));
        assert_ne!(a, random_logical_states(10, 5, 4));
        assert!(a.iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
    }
}
