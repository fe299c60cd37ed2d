//! Invariant suites run by `holodd verify`. Each suite reduces to one
//! number compared against a bound.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::run::OpenSystemSpec;
use super::sweep::{interaction_only_defects, log_grid, scaling_slopes};
use super::config::RunConfig;
use crate::error::Result;
use crate::evolution::propagate;
use crate::exec::Execution;
use crate::hamiltonian::{
    build_h1, build_h2, EncodingKind, Envelope, GateParams1Q, GateParams2Q, LogicalEncoding, TimeDependentHamiltonian,
};
use crate::holonomy::{
    analytic_target, analytic_u2, closed_system_report, entangling_check,
    extract_logical_gate, gamma, operator_schmidt_values, rx, rz, u1_rotation_form, u2_controlled_form,
};
use crate::linalg::{c64, matexp_hermitian, partial_trace, phase_aligned_distance, ComplexMatrix};
use crate::noise::{build_interaction, decoupling_average, sample_noise, NoiseVariant};
use crate::operators::{collective_pauli, xxz_term, PauliAxis};

pub const GATE1_DRAWS: usize = 20;
pub const GATE2_DRAWS: usize = 10;
pub const NOISE_SEEDS: u64 = 10;
pub const PT_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

impl Bound {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(t) => v <= t,
            Bound::AtLeast(t) => v >= t,
            Bound::Within(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(t) => write!(f, "<= {t:e}"),
            Bound::AtLeast(t) => write!(f, ">= {t:e}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<40} {:.6e} ({})", self.name, self.value, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn get(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn failed(&self) -> Vec<&SuiteResult> {
        self.suites.iter().filter(|s| !s.passed).collect()
    }
}

pub type H1Builder = fn(&GateParams1Q) -> TimeDependentHamiltonian;
pub type H2Builder = fn(&GateParams2Q) -> TimeDependentHamiltonian;

/// Hamiltonian builders under test; tests swap in faulty builders to check
/// that the suites catch them.
#[derive(Clone, Copy, Debug)]
pub struct VerifyContext {
    pub h1: H1Builder,
    pub h2: H2Builder,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for VerifyContext {
    fn default() -> Self {
        Self { h1: build_h1, h2: build_h2, seed: 0, exec: Execution::default() }
    }
}

/// Seeded `(θ, φ)` draws with `θ ∈ [0, 2π)`, `|φ| ≤ 1.3` (keeps `γ` away
/// from multiples of `2π`).
pub fn parameter_draws(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (rng.random_range(0.0..2.0 * PI), rng.random_range(-1.3..1.3))).collect()
}

/// Three-level form of the one-qubit gate operator on `(|0_L>, |1_L>, |a>)`.
pub fn reduced_h1_block(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let (g, z) = (phi.cos(), phi.sin());
    let r = |x: f64| c64(x, 0.0);
    ComplexMatrix::from_rows(&[
        vec![r(-z), r(0.0), r(g * s)],
        vec![r(0.0), r(-z), r(-g * c)],
        vec![r(g * s), r(-g * c), r(z)],
    ])
    .expect("square")
}

/// Six-level form on `(|00>, |01>, |10>, |11>, |a1>, |a2>)`.
pub fn reduced_h2_block(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let (g, z) = (phi.cos(), phi.sin());
    let mut m = ComplexMatrix::from_diagonal(&[-z, -z, -z, -z, z, z].map(|x| c64(x, 0.0)));
    for (i, j, v) in [(4, 0, g * s), (4, 1, -g * c), (5, 2, -g * c), (5, 3, g * s)] {
        m[(i, j)] = c64(v, 0.0);
        m[(j, i)] = c64(v, 0.0);
    }
    m
}

fn result(name: &str, value: f64, bound: Bound) -> SuiteResult {
    // NaN never passes.
    SuiteResult { name: name.to_string(), value, bound, passed: bound.holds(value) }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn unit_envelope() -> Envelope {
    Envelope::default()
}

fn h1_of(ctx: &VerifyContext, theta: f64, phi: f64, envelope: Envelope) -> TimeDependentHamiltonian {
    (ctx.h1)(&GateParams1Q { theta1: theta, phi1: phi, envelope })
}

fn h2_of(ctx: &VerifyContext, theta: f64, phi: f64, envelope: Envelope) -> TimeDependentHamiltonian {
    (ctx.h2)(&GateParams2Q { theta2: theta, phi2: phi, envelope })
}

fn commutation_residual(h: &ComplexMatrix, n: usize) -> f64 {
    worst(PauliAxis::XYZ.iter().map(|&a| h.commutator(&collective_pauli(a, n)).op_norm()))
}

fn leakage_out_of_subspace(a: &ComplexMatrix, enc: &LogicalEncoding) -> f64 {
    let pi = ComplexMatrix::projector(&enc.subspace_kets());
    let out = &ComplexMatrix::identity(a.dim()) - &pi;
    (&(&out * a) * &pi).op_norm()
}

pub fn linalg_suites(ctx: &VerifyContext) -> Vec<SuiteResult> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut gauss = |dim: usize| {
        ComplexMatrix::from_fn(dim, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c64(re, im)
        })
    };
    let mut exp_res: f64 = 0.0;
    let mut group_res: f64 = 0.0;
    for dim in [2, 8, 64, 256] {
        let g = gauss(dim);
        let h = (&g + &g.dagger()).scale_real(0.5);
        let u = matexp_hermitian(&h, 0.3).expect("hermitian");
        let v = matexp_hermitian(&h, 0.4).expect("hermitian");
        let w = matexp_hermitian(&h, 0.7).expect("hermitian");
        exp_res = exp_res.max(u.unitarity_residual());
        group_res = group_res.max((&(&u * &v) - &w).max_abs());
    }
    let rho_a = {
        let g = gauss(4);
        let r = &g * &g.dagger();
        let tr = r.trace();
        r.scale(c64(1.0, 0.0) / tr)
    };
    let rho_b = {
        let g = gauss(3);
        let r = &g * &g.dagger();
        let tr = r.trace();
        r.scale(c64(1.0, 0.0) / tr)
    };
    let traced = partial_trace(&rho_a.kron(&rho_b), &[4, 3], &[0]).expect("valid dims");
    vec![
        result("linalg.exp_unitarity", exp_res, Bound::AtMost(1e-12)),
        result("linalg.exp_group_property", group_res, Bound::AtMost(1e-11)),
        result("linalg.partial_trace_product", (&traced - &rho_a).max_abs(), Bound::AtMost(1e-13)),
    ]
}

pub fn operator_suites(ctx: &VerifyContext) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed);
    let mut res: f64 = 0.0;
    for n in [3, 6] {
        for k in 1..n {
            for l in k + 1..=n {
                let term = xxz_term(k, l, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), n).expect("k < l");
                res = res.max(commutation_residual(&term, n));
            }
        }
    }
    let mut inv: f64 = 0.0;
    for n in [3, 6] {
        for a in PauliAxis::XYZ {
            let p = collective_pauli(a, n);
            inv = inv.max((&(&p * &p) - &ComplexMatrix::identity(p.dim())).max_abs());
        }
    }
    vec![
        result("operators.xxz_commutes_with_group", res, Bound::AtMost(1e-13)),
        result("operators.collective_involution", inv, Bound::AtMost(1e-15)),
    ]
}

pub fn hamiltonian_suites(ctx: &VerifyContext) -> Vec<SuiteResult> {
    let draws = parameter_draws(ctx.seed, GATE2_DRAWS);
    let one = LogicalEncoding::one_qubit();
    let two = LogicalEncoding::two_qubit();
    let mut compat: f64 = 0.0;
    let mut p1: f64 = 0.0;
    let mut p2: f64 = 0.0;
    let mut inv: f64 = 0.0;
    for &(theta, phi) in &draws {
        for envelope in [unit_envelope(), Envelope::sine(1.0).expect("positive")] {
            let h1 = h1_of(ctx, theta, phi, envelope);
            let h2 = h2_of(ctx, theta, phi, envelope);
            for t in [0.0, 0.37, 0.5, 0.81] {
                compat = compat.max(commutation_residual(&h1.at(t), 3));
                compat = compat.max(commutation_residual(&h2.at(t), 6));
            }
        }
        let h1 = h1_of(ctx, theta, phi, unit_envelope()).constant_part;
        let h2 = h2_of(ctx, theta, phi, unit_envelope()).constant_part;
        p1 = p1.max((&h1.project(&one.subspace_kets()) - &reduced_h1_block(theta, phi)).max_abs());
        p2 = p2.max((&h2.project(&two.subspace_kets()) - &reduced_h2_block(theta, phi)).max_abs());
        inv = inv.max(leakage_out_of_subspace(&h1, &one)).max(leakage_out_of_subspace(&h2, &two));
    }
    let sine = Envelope::sine(1.0).expect("positive");
    let constant = unit_envelope();
    let area = worst([(sine.area(0.0, 1.0, 1_000_000) - PI).abs(), (constant.area(0.0, 1.0, 1) - PI).abs()]);
    vec![
        result("hamiltonian.decoupling_compatibility", compat, Bound::AtMost(1e-13)),
        result("hamiltonian.h1_projection", p1, Bound::AtMost(1e-13)),
        result("hamiltonian.h2_projection", p2, Bound::AtMost(1e-13)),
        result("hamiltonian.invariant_subspace", inv, Bound::AtMost(1e-13)),
        result("hamiltonian.envelope_area", area, Bound::AtMost(1e-10)),
    ]
}

pub fn noise_suites(ctx: &VerifyContext) -> Vec<SuiteResult> {
    [("independent", NoiseVariant::Independent), ("collective", NoiseVariant::Collective), ("dephasing", NoiseVariant::Dephasing)]
        .iter()
        .map(|&(label, variant)| {
            let seeds: Vec<u64> = (0..NOISE_SEEDS).map(|s| ctx.seed.wrapping_add(s)).collect();
            let residuals = ctx.exec.map(&seeds, |&seed| {
                let model = sample_noise(seed, 3, 4, 0.05 * PI, 0.1 * PI, variant).expect("valid noise");
                let h = build_interaction(&model, 3).expect("matching qubits");
                decoupling_average(&h, 3, 4).max_abs()
            });
            result(&format!("noise.cancellation_{label}"), worst(residuals), Bound::AtMost(1e-12))
        })
        .collect()
}

struct GateStats {
    infidelity: f64,
    cyclic: f64,
    pt: f64,
}

fn gate_stats(ctx: &VerifyContext, kind: EncodingKind, draws: &[(f64, f64)]) -> Result<GateStats> {
    let enc = LogicalEncoding::for_kind(kind);
    let reports = ctx.exec.try_map(draws, |&(theta, phi)| {
        let h = match kind {
            EncodingKind::OneQubit => h1_of(ctx, theta, phi, unit_envelope()),
            EncodingKind::TwoQubit => h2_of(ctx, theta, phi, unit_envelope()),
        };
        closed_system_report(&h, &enc, theta, phi, 1, PT_SAMPLES)
    })?;
    Ok(GateStats {
        infidelity: worst(reports.iter().map(|r| 1.0 - r.fidelity)),
        cyclic: worst(reports.iter().map(|r| r.cyclic_residual)),
        pt: worst(reports.iter().map(|r| r.pt_residual)),
    })
}

fn simulated_gate(h: &TimeDependentHamiltonian, enc: &LogicalEncoding, steps: usize) -> Result<ComplexMatrix> {
    let u = propagate(h, 0.0, h.total_time(), steps)?;
    Ok(extract_logical_gate(&u, enc)?.0)
}

fn gate_suites(ctx: &VerifyContext, kind: EncodingKind, draws: usize, prefix: &str) -> Vec<SuiteResult> {
    let params = parameter_draws(ctx.seed.wrapping_add(kind as u64 + 1), draws);
    let (inf, cyc, pt) = match gate_stats(ctx, kind, &params) {
        Ok(s) => (s.infidelity, s.cyclic, s.pt),
        Err(_) => (f64::NAN, f64::NAN, f64::NAN),
    };
    vec![
        result(&format!("holonomy.{prefix}_infidelity"), inf, Bound::AtMost(1e-8)),
        result(&format!("holonomy.{prefix}_cyclic"), cyc, Bound::AtMost(1e-8)),
        result(&format!("holonomy.{prefix}_parallel_transport"), pt, Bound::AtMost(1e-9)),
    ]
}

pub fn holonomy_suites(ctx: &VerifyContext) -> Vec<SuiteResult> {
    let mut out = gate_suites(ctx, EncodingKind::OneQubit, GATE1_DRAWS, "u1");
    out.extend(gate_suites(ctx, EncodingKind::TwoQubit, GATE2_DRAWS, "u2"));
    let one = LogicalEncoding::one_qubit();
    let two = LogicalEncoding::two_qubit();

    // Sine and constant envelopes of equal area give the same gate.
    let envelope_gap = (|| -> Result<f64> {
        let (theta, phi) = (0.9, 0.4);
        let a = simulated_gate(&h1_of(ctx, theta, phi, unit_envelope()), &one, 1)?;
        let b = simulated_gate(&h1_of(ctx, theta, phi, Envelope::sine(1.0)?), &one, 100_000)?;
        Ok(phase_aligned_distance(&a, &b))
    })()
    .unwrap_or(f64::NAN);
    out.push(result("holonomy.envelope_independence", envelope_gap, Bound::AtMost(1e-8)));

    let rotations = (|| -> Result<f64> {
        let mut r: f64 = 0.0;
        for phi in [-1.0, -0.3, 0.0, 0.5, 1.2] {
            let g = gamma(phi);
            let x = simulated_gate(&h1_of(ctx, PI / 2.0, phi, unit_envelope()), &one, 1)?;
            let z = simulated_gate(&h1_of(ctx, 0.0, phi, unit_envelope()), &one, 1)?;
            r = r.max(phase_aligned_distance(&x, &rx(g))).max(phase_aligned_distance(&z, &rz(g)));
        }
        Ok(r)
    })()
    .unwrap_or(f64::NAN);
    out.push(result("holonomy.axis_rotations", rotations, Bound::AtMost(1e-8)));

    let cphase = (|| -> Result<f64> {
        let mut r: f64 = 0.0;
        for phi in [-1.0, 0.0, 0.7] {
            let g = gamma(phi);
            let u = simulated_gate(&h2_of(ctx, 0.0, phi, unit_envelope()), &two, 1)?;
            let local = ComplexMatrix::identity(2).kron(&rz(-g));
            let target = ComplexMatrix::from_diagonal(&[
                c64(1.0, 0.0),
                c64(1.0, 0.0),
                c64(g.cos(), g.sin()),
                c64(g.cos(), -g.sin()),
            ]);
            r = r.max(phase_aligned_distance(&(&local * &u), &target));
        }
        Ok(r)
    })()
    .unwrap_or(f64::NAN);
    out.push(result("holonomy.controlled_phase", cphase, Bound::AtMost(1e-10)));

    let mut forms: f64 = 0.0;
    for &(theta, phi) in &parameter_draws(ctx.seed ^ 0xf0, GATE2_DRAWS) {
        forms = forms
            .max(phase_aligned_distance(&analytic_target(EncodingKind::OneQubit, theta, phi), &u1_rotation_form(theta, phi)))
            .max(phase_aligned_distance(&analytic_u2(theta, phi), &u2_controlled_form(theta, phi)));
    }
    out.push(result("holonomy.analytic_forms", forms, Bound::AtMost(1e-12)));

    let draws = parameter_draws(ctx.seed ^ 0xe7, GATE2_DRAWS);
    let min_rank = draws.iter().map(|&(t, p)| entangling_check(&analytic_u2(t, p)).unwrap_or(0)).min().unwrap_or(0);
    let second_sv = draws
        .iter()
        .map(|&(t, p)| operator_schmidt_values(&analytic_u2(t, p)).map(|v| v.get(1).copied().unwrap_or(0.0)).unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min);
    out.push(result("holonomy.u2_schmidt_rank", min_rank as f64, Bound::AtLeast(2.0)));
    out.push(result("holonomy.u2_second_schmidt_value", second_sv, Bound::AtLeast(1e-10)));
    out
}

/// Decoupling scaling on 8 log-spaced τ in `[1e-3, 1e-1]`.
pub fn scaling_suites(ctx: &VerifyContext) -> Vec<SuiteResult> {
    let cfg = RunConfig { noise: crate::harness::config::NoiseConfig { seed: Some(ctx.seed), ..Default::default() }, ..Default::default() }
        .resolve()
        .expect("defaults resolve");
    let taus = log_grid(1e-3, 1e-1, 8);
    let rows = ctx.exec.try_map(&taus, |&tau| interaction_only_defects(&cfg, tau, ctx.seed));
    let (dd, free) = rows.ok().and_then(|r| scaling_slopes(&r)).unwrap_or((f64::NAN, f64::NAN));
    vec![
        result("evolution.dd_defect_slope", dd, Bound::Within(1.9, 2.1)),
        result("evolution.free_defect_slope", free, Bound::Within(0.9, 1.1)),
    ]
}

/// One noisy one-qubit gate at default settings; the decoupled arm must win.
pub fn dd_benefit_suite(ctx: &VerifyContext) -> Vec<SuiteResult> {
    let cfg = RunConfig { noise: crate::harness::config::NoiseConfig { seed: Some(ctx.seed), ..Default::default() }, ..Default::default() }
        .resolve()
        .expect("defaults resolve");
    let ratio = OpenSystemSpec::from_config(&cfg)
        .evaluate()
        .map(|r| r.no_dd.infidelity() / r.dd.expect("xyz4 default").infidelity())
        .unwrap_or(f64::NAN);
    vec![result("evolution.dd_improvement_factor", ratio, Bound::AtLeast(1.0))]
}

/// Runs every suite in a fixed order.
pub fn run_verify(ctx: &VerifyContext) -> VerifySummary {
    let mut suites = linalg_suites(ctx);
    suites.extend(operator_suites(ctx));
    suites.extend(hamiltonian_suites(ctx));
    suites.extend(noise_suites(ctx));
    suites.extend(holonomy_suites(ctx));
    suites.extend(scaling_suites(ctx));
    suites.extend(dd_benefit_suite(ctx));
    VerifySummary { suites }
}
