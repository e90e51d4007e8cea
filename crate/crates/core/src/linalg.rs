//! Small dense complex matrices.
//!
//! Everything here works on row-major `dim × dim` matrices of [`Complex64`].
//! The two-qubit code only ever needs `dim ∈ {2, 4}`; the channel checks use
//! `16` for Choi matrices. Qubit ordering in tensor products is fixed: the
//! first factor is qubit 1, so `(A⊗B)[2i+k][2j+l] = A[i][j]·B[k][l]`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{QcorrError, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hermiticity tolerance accepted by [`hermitian_eigensystem`].
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Negative eigenvalues above this are clipped to zero by [`matrix_sqrt_psd`].
pub const PSD_CLIP_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `data.len() == dim²`.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(QcorrError::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Element-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Largest element magnitude, `max_ij |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_ij |a_ij − b_ij|`; panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max_ij |a_ij − conj(a_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Symmetrises numerically: `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&adj.data) {
            *a = (*a + b) * 0.5;
        }
        m
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    fn check_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "matrix dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_dim(rhs);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Pauli matrices, `σ_0 = I` through `σ_3 = σ_z`.
pub fn pauli(k: usize) -> ComplexMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let data = match k {
        0 => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        1 => vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        2 => vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        3 => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => panic!("pauli index {k} out of range"),
    };
    ComplexMatrix { dim: 2, data }
}

/// Kronecker product of arbitrary square matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(nb * i + k, nb * j + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Two-qubit tensor product `A ⊗ B` of single-qubit operators.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(QcorrError::DimensionMismatch {
                expected: 2,
                actual: m.dim,
            });
        }
    }
    Ok(kron(a, b))
}

/// Which qubit of a two-qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        }
    }

    /// 1-based index, matching the `measured = 1|2` config values.
    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            1 => Some(Subsystem::First),
            2 => Some(Subsystem::Second),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Subsystem::First => 1,
            Subsystem::Second => 2,
        }
    }
}

/// Reduced 2×2 state of the qubit `keep` from a 4×4 operator.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim != 4 {
        return Err(QcorrError::DimensionMismatch {
            expected: 4,
            actual: rho.dim,
        });
    }
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = ZERO;
            for k in 0..2 {
                acc += match keep {
                    Subsystem::First => rho[(2 * i + k, 2 * j + k)],
                    Subsystem::Second => rho[(2 * k + i, 2 * k + j)],
                };
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &w) in fl.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back in descending order. Each eigenvector is rotated so
/// that its first non-negligible component is real and positive.
pub fn hermitian_eigensystem(a: &ComplexMatrix) -> Result<EigenSystem> {
    let deviation = a.hermiticity_deviation();
    if !(deviation < HERMITIAN_TOL) {
        return Err(QcorrError::NotHermitian { deviation });
    }
    Ok(jacobi(a.hermitian_part()))
}

fn jacobi(mut a: ComplexMatrix) -> EigenSystem {
    let n = a.dim;
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let b_abs = b.norm();
                if b_abs <= 1e-300 {
                    continue;
                }
                let phase = b / b_abs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * b_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = diag(1, e^{-iα}) · [[c, s], [-s, c]] on the (p, q) plane.
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let mut vectors = ComplexMatrix::zeros(n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        values.push(a[(k, k)].re);
        let lead = (0..n)
            .map(|i| v[(i, k)])
            .find(|z| z.norm() > 1e-12)
            .unwrap_or(ONE);
        let fix = lead.conj() / lead.norm();
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)] * fix;
        }
    }
    EigenSystem {
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// Singular values (descending) by one-sided Jacobi rotations on the columns.
///
/// Small singular values come out with absolute error near machine epsilon
/// times the matrix norm, which the `sqrt(eig(A†A))` route cannot deliver.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim;
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)]).collect())
        .collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g <= 1e-16 * (alpha * beta).sqrt() || g <= 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                let (lo, hi) = cols.split_at_mut(q);
                for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    (*xp, *xq) = (*xp * c + *xq * u_qp, *xp * s + *xq * u_qq);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are clipped to zero; anything more negative is
/// an error.
pub fn matrix_sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_with_floor(a, -PSD_CLIP_TOL)
}

pub(crate) fn sqrt_psd_with_floor(a: &ComplexMatrix, floor: f64) -> Result<ComplexMatrix> {
    let es = hermitian_eigensystem(a)?;
    let min_eigenvalue = es.min_eigenvalue();
    if min_eigenvalue < floor {
        return Err(QcorrError::NotPsd { min_eigenvalue });
    }
    Ok(es.map_spectrum(|l| l.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_row_major(n, data).unwrap()
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
        random_matrix(rng, n).hermitian_part().scale_real(scale)
    }

    #[test]
    fn pauli_z_spectrum() {
        let es = hermitian_eigensystem(&pauli(3)).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, -1.0]);
    }

    #[test]
    fn identity_spectrum() {
        let es = hermitian_eigensystem(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0; 4]);
        assert!(es.eigenvectors.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(QcorrError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_residuals_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 4, 16] {
            for _ in 0..200 {
                let h = random_hermitian(&mut rng, n, 10.0);
                let es = hermitian_eigensystem(&h).unwrap();
                for w in es.eigenvalues.windows(2) {
                    assert!(w[0] >= w[1]);
                }
                for k in 0..n {
                    let v = es.eigenvector(k);
                    for i in 0..n {
                        let hv: Complex64 = (0..n).map(|j| h[(i, j)] * v[j]).sum();
                        assert!((hv - v[i] * es.eigenvalues[k]).norm() < 1e-10);
                    }
                }
                let vv = &es.eigenvectors.adjoint() * &es.eigenvectors;
                assert!(vv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
                let rebuilt = es.map_spectrum(|l| l);
                assert!(rebuilt.max_abs_diff(&h) < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_is_deterministic() {
        let m = ComplexMatrix::from_real_diagonal(&[0.5, 0.5, 0.0, 0.0]);
        let a = hermitian_eigensystem(&m).unwrap();
        let b = hermitian_eigensystem(&m).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn tensor_of_identities() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(
            tensor_product(&id, &id).unwrap(),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn tensor_basis_projector() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let got = tensor_product(&p0, &p1).unwrap();
        assert_eq!(
            got,
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0])
        );
    }

    #[test]
    fn tensor_rejects_wrong_dims() {
        let id4 = ComplexMatrix::identity(4);
        let id2 = ComplexMatrix::identity(2);
        assert!(tensor_product(&id4, &id2).is_err());
    }

    #[test]
    fn tensor_trace_and_elementwise_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_matrix(&mut rng, 2);
            let b = random_matrix(&mut rng, 2);
            let ab = tensor_product(&a, &b).unwrap();
            assert!((ab.trace() - a.trace() * b.trace()).norm() < 1e-12);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            assert_eq!(ab[(2 * i + k, 2 * j + l)], a[(i, j)] * b[(k, l)]);
                        }
                    }
                }
            }
            // bilinearity in the first slot
            let a2 = random_matrix(&mut rng, 2);
            let lhs = tensor_product(&(&a + &a2), &b).unwrap();
            let rhs = &ab + &tensor_product(&a2, &b).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_row_major(
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        )
        .unwrap();
        let b = ComplexMatrix::from_real_diagonal(&[0.4, 0.6]);
        let ab = kron(&a, &b);
        assert!(
            partial_trace(&ab, Subsystem::First)
                .unwrap()
                .max_abs_diff(&a)
                < 1e-15
        );
        assert!(
            partial_trace(&ab, Subsystem::Second)
                .unwrap()
                .max_abs_diff(&b)
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = ComplexMatrix::outer(&[c(h, 0.0), ZERO, ZERO, c(h, 0.0)]);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        for keep in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(&phi_plus, keep).unwrap();
            assert!(r.max_abs_diff(&half) < 1e-15);
        }
        assert!(partial_trace(&ComplexMatrix::identity(2), Subsystem::First).is_err());
    }

    #[test]
    fn sqrt_of_scalar_matrices() {
        let id = ComplexMatrix::identity(4);
        assert!(matrix_sqrt_psd(&id).unwrap().max_abs_diff(&id) < 1e-15);
        let q = id.scale_real(0.25);
        assert!(
            matrix_sqrt_psd(&q)
                .unwrap()
                .max_abs_diff(&id.scale_real(0.5))
                < 1e-15
        );
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = random_matrix(&mut rng, 4);
            let psd = &g * &g.adjoint();
            let s = matrix_sqrt_psd(&psd).unwrap();
            assert!(s.hermiticity_deviation() < 1e-12);
            assert!((&s * &s).max_abs_diff(&psd) < 1e-8);
            assert!(hermitian_eigensystem(&s).unwrap().min_eigenvalue() >= -1e-12);
        }
    }

    #[test]
    fn singular_values_match_gram_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in [2, 3, 4] {
            for _ in 0..100 {
                let a = random_matrix(&mut rng, n);
                let sv = singular_values(&a);
                let gram = hermitian_eigensystem(&(&a.adjoint() * &a)).unwrap();
                for (s, l) in sv.iter().zip(&gram.eigenvalues) {
                    assert!((s * s - l).abs() < 1e-12);
                }
            }
        }
        let rank_one = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        assert_eq!(singular_values(&rank_one), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn sqrt_clips_and_rejects() {
        let tiny = ComplexMatrix::from_real_diagonal(&[1.0, -5e-10]);
        let s = matrix_sqrt_psd(&tiny).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
        let neg = ComplexMatrix::from_real_diagonal(&[1.0, -1e-6]);
        assert!(matches!(
            matrix_sqrt_psd(&neg),
            Err(QcorrError::NotPsd { .. })
        ));
    }
}
