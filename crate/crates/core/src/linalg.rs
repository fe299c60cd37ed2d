//! Dense complex matrix algebra.
//!
//! [`ComplexMatrix`] is a square matrix of `Complex64` entries and carries every
//! operator in the simulator: Hamiltonians, propagators, pulses and density
//! matrices. Eigen and singular value decompositions are delegated to
//! `nalgebra`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Column state vector.
pub type Ket = DVector<Complex64>;

/// Tolerance used by hermiticity and unitarity preconditions.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Largest operator dimension the simulator is sized for.
pub const MAX_DIM: usize = 1024;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { Complex64::new(0.0, 0.0) })
    }

    /// Builds a matrix from row slices; all rows must have the same length as
    /// the number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a {n}-row matrix",
                bad.len()
            )));
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    /// `|a><b|`
    pub fn outer(a: &Ket, b: &Ket) -> Self {
        assert_eq!(a.len(), b.len(), "outer product of kets with different lengths");
        Self(a * b.adjoint())
    }

    /// Projector onto the span of orthonormal `kets`.
    pub fn projector(kets: &[Ket]) -> Self {
        assert!(!kets.is_empty(), "projector needs at least one ket");
        let dim = kets[0].len();
        let mut p = Self::zeros(dim);
        for k in kets {
            p += &Self::outer(k, k);
        }
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matmul of {0}x{0} by {1}x{1}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        assert_eq!(self.dim(), ket.len(), "operator/ket dimension mismatch");
        &self.0 * ket
    }

    /// `<a|A|b>`
    pub fn sandwich(&self, a: &Ket, b: &Ket) -> Complex64 {
        a.dotc(&self.apply(b))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    /// `AB - BA`; panics on mismatched dimensions.
    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A†|` over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |A†A - I|` over entries.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = self.0.adjoint() * &self.0;
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn frob_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().into_iter().fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.0.clone().svd(false, false).singular_values.iter().copied().collect()
    }

    /// Eigendecomposition of a Hermitian matrix. Eigenvalues are returned in
    /// ascending order with the matching eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let residual = self.hermiticity_residual();
        if residual > STRUCTURE_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let eig = self.0.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        Ok((values, ComplexMatrix(vectors)))
    }

    pub fn column(&self, j: usize) -> Ket {
        self.0.column(j).into_owned()
    }

    /// Submatrix `<kets[i]|A|kets[j]>`.
    pub fn project(&self, kets: &[Ket]) -> ComplexMatrix {
        let images: Vec<Ket> = kets.iter().map(|k| self.apply(k)).collect();
        ComplexMatrix::from_fn(kets.len(), |i, j| kets[i].dotc(&images[j]))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 + rhs.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 - rhs.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Serialized as a list of rows, each entry a `[re, im]` pair.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn op_norm(a: &ComplexMatrix) -> f64 {
    a.op_norm()
}

pub fn frob_norm(a: &ComplexMatrix) -> f64 {
    a.frob_norm()
}

/// `exp(-i * scale * h)` for Hermitian `h`, via eigendecomposition.
pub fn matexp_hermitian(h: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    let (values, vectors) = h.eigh()?;
    let v = vectors.as_dmatrix();
    let mut scaled = v.clone();
    for (j, e) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -scale * e);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    Ok(ComplexMatrix(scaled * v.adjoint()))
}

/// Partial trace of `rho` over every subsystem not listed in `keep`.
///
/// `dims` lists subsystem dimensions left to right (leftmost is most
/// significant); `keep` holds zero-based subsystem indices. The kept factors
/// appear in the result in their original order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not factor a {}-dim operator",
            rho.dim()
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "invalid kept subsystems {keep:?} for {} factors",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();

    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    // Offset of every multi-index over a subset of factors.
    let offsets = |subset: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subset {
            let mut next = Vec::with_capacity(out.len() * dims[s]);
            for base in &out {
                for d in 0..dims[s] {
                    next.push(base + d * strides[s]);
                }
            }
            out = next;
        }
        out
    };
    let kept_offsets = offsets(&keep_sorted);
    let traced_offsets = offsets(&traced);

    let dk = kept_offsets.len();
    let m = rho.as_dmatrix();
    Ok(ComplexMatrix::from_fn(dk, |a, b| {
        traced_offsets
            .iter()
            .map(|t| m[(kept_offsets[a] + t, kept_offsets[b] + t)])
            .sum()
    }))
}

/// Computational basis ket `e_index` in dimension `dim`.
pub fn basis_ket(dim: usize, index: usize) -> Ket {
    let mut v = Ket::zeros(dim);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

/// Phase-invariant distance `min_φ max|A - e^{iφ} B|`, with the phase taken
/// from the overlap `Tr(B† A)`.
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap = (b.dagger() * a.clone()).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a - &b.scale(phase)).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap()
    }

    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), c64(-1.0, 0.0)])
    }

    fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let g = random_matrix(rng, n);
        (&g + &g.dagger()).scale_real(0.5)
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let xx = kron(&sx(), &sx());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(i, j)], c64(expected, 0.0));
            }
        }

        let zz = kron(&sz(), &sz());
        let diag: Vec<f64> = (0..4).map(|i| zz[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn kron_index_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 2);
        let b = random_matrix(&mut rng, 3);
        let k = kron(&a, &b);
        assert_eq!(k.dim(), 6);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k[(i * 3 + p, j * 3 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (a, b, c) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 3), random_matrix(&mut rng, 2));
        let lhs = kron(&kron(&a, &b), &c);
        let rhs = kron(&a, &kron(&b, &c));
        assert!((&lhs - &rhs).max_abs() <= 1e-14);
    }

    #[test]
    fn exp_of_pauli_z_is_diagonal_phase() {
        let t = 0.37;
        let u = matexp_hermitian(&sz(), t).unwrap();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, -t)).norm() < 1e-14);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, t)).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14 && u[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn exp_of_pauli_x_quarter_turn() {
        let u = matexp_hermitian(&sx(), FRAC_PI_2).unwrap();
        let expected = sx().scale(c64(0.0, -1.0));
        assert!((&u - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(matexp_hermitian(&m, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_unitarity_up_to_dim_256() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &n in &[2usize, 7, 32, 64, 256] {
            let h = random_hermitian(&mut rng, n);
            let u = matexp_hermitian(&h, rng.random_range(-3.0..3.0)).unwrap();
            assert!(u.unitarity_residual() <= 1e-10, "dim {n}: {}", u.unitarity_residual());
        }
    }

    #[test]
    fn exp_group_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 6);
            let (t, s) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let lhs = matexp_hermitian(&h, t).unwrap() * matexp_hermitian(&h, s).unwrap();
            let rhs = matexp_hermitian(&h, t + s).unwrap();
            assert!((&lhs - &rhs).max_abs() <= 1e-10);
        }
    }

    #[test]
    fn constant_pauli_z_over_pi_is_minus_identity() {
        let u = matexp_hermitian(&sz(), PI).unwrap();
        assert!((&u - &ComplexMatrix::identity(2).scale_real(-1.0)).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut phi = Ket::zeros(4);
        phi[0] = c64(s, 0.0);
        phi[3] = c64(s, 0.0);
        let rho = ComplexMatrix::outer(&phi, &phi);
        let reduced = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!((&reduced - &half).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 3);
        let b = b.scale(c64(1.0, 0.0) / b.trace());
        let reduced = partial_trace(&kron(&a, &b), &[2, 3], &[0]).unwrap();
        assert!((&reduced - &a).max_abs() < 1e-13);
        let reduced_b = partial_trace(&kron(&a, &b), &[2, 3], &[1]).unwrap();
        assert!((&reduced_b - &b.scale(a.trace())).max_abs() < 1e-13);
    }

    /// Definition-level oracle: sum over the traced index explicitly.
    fn trace_second_factor(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(da, |i, j| (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum())
    }

    #[test]
    fn partial_trace_of_random_8x4_pure_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut psi = Ket::from_fn(32, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        psi /= c64(psi.norm(), 0.0);
        let rho = ComplexMatrix::outer(&psi, &psi);
        let reduced = partial_trace(&rho, &[8, 4], &[0]).unwrap();
        assert!((reduced.trace() - c64(1.0, 0.0)).norm() <= 1e-12);
        assert!(reduced.is_hermitian(1e-14));
        assert!((&reduced - &trace_second_factor(&rho, 8, 4)).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_middle_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 3);
        let c = random_hermitian(&mut rng, 2);
        let rho = kron(&kron(&a, &b), &c);
        let reduced = partial_trace(&rho, &[2, 3, 2], &[1]).unwrap();
        let expected = b.scale(a.trace() * c.trace());
        assert!((&reduced - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn partial_trace_dimension_errors() {
        let rho = ComplexMatrix::identity(6);
        assert!(matches!(partial_trace(&rho, &[2, 2], &[0]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(partial_trace(&rho, &[2, 3], &[2]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn norms_and_adjoint() {
        assert!((sx().op_norm() - 1.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 5);
            assert_eq!(a.dagger().dagger(), a);
            assert!(a.op_norm() <= a.frob_norm() + 1e-14);
        }
        assert!(matches!(
            matmul(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn op_norm_matches_largest_eigenvalue_for_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = random_hermitian(&mut rng, 6);
        let (values, _) = h.eigh().unwrap();
        let spectral = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((h.op_norm() - spectral).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn partial_trace_is_linear_and_trace_preserving(seed in any::<u64>(), alpha in -2.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, 12);
            let b = random_matrix(&mut rng, 12);
            let combo = &a + &b.scale_real(alpha);
            let lhs = partial_trace(&combo, &[3, 4], &[1]).unwrap();
            let rhs = &partial_trace(&a, &[3, 4], &[1]).unwrap()
                + &partial_trace(&b, &[3, 4], &[1]).unwrap().scale_real(alpha);
            prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
            prop_assert!((lhs.trace() - combo.trace()).norm() < 1e-12);
        }

        #[test]
        fn matexp_is_unitary(seed in any::<u64>(), n in 1usize..12, t in -5.0f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, n);
            prop_assert!(matexp_hermitian(&h, t).unwrap().unitarity_residual() <= 1e-10);
        }
    }
}
