//! Density matrices, their Fano (Bloch-vector / correlation-matrix) form,
//! entropies, and the standard fixture states.
//!
//! Basis convention for a qubit: `|0⟩ = |e⟩` (excited), `|1⟩ = |g⟩` (ground).
//! Two-qubit basis order is `{|00⟩, |01⟩, |10⟩, |11⟩} = {|ee⟩, |eg⟩, |ge⟩, |gg⟩}`.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{QcorrError, Result};
use crate::linalg::{self, hermitian_eigensystem, kron, pauli, ComplexMatrix, Subsystem, ZERO};

pub const TRACE_TOL: f64 = 1e-9;
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Positivity floor for static states.
pub const POSITIVITY_FLOOR: f64 = -1e-8;

/// Entropy in bits. Every entropy in the crate goes through this.
#[inline]
pub fn log_info(x: f64) -> f64 {
    x.log2()
}

/// `-Σ λ log λ` in bits with `0 log 0 = 0`; non-positive entries contribute nothing.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * log_info(l))
        .sum::<f64>()
        .max(0.0)
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    spectrum_entropy(&[p, 1.0 - p])
}

/// Entropy of a qubit state with Bloch vector of length `norm`.
#[inline]
pub fn qubit_entropy(norm: f64) -> f64 {
    let n = norm.min(1.0);
    binary_entropy(0.5 * (1.0 + n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.passes_with_floor(POSITIVITY_FLOOR)
    }

    pub fn passes_with_floor(&self, floor: f64) -> bool {
        self.trace_deviation < TRACE_TOL
            && self.hermiticity_deviation < HERMITICITY_TOL
            && self.min_eigenvalue >= floor
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|Tr ρ - 1| = {:.3e}, ‖ρ - ρ†‖ = {:.3e}, min eigenvalue = {:.3e}",
            self.trace_deviation, self.hermiticity_deviation, self.min_eigenvalue
        )
    }
}

/// Checks trace, Hermiticity and positivity of a candidate density matrix.
pub fn validate(m: &ComplexMatrix) -> ValidationReport {
    let trace = m.trace();
    let min_eigenvalue = hermitian_eigensystem(&m.hermitian_part())
        .map(|es| es.min_eigenvalue())
        .unwrap_or(f64::NAN);
    ValidationReport {
        trace_deviation: (trace - 1.0).norm(),
        hermiticity_deviation: m.hermiticity_deviation(),
        min_eigenvalue,
    }
}

/// A validated qubit or two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_positivity_floor(matrix, POSITIVITY_FLOOR)
    }

    /// Like [`DensityMatrix::new`] but with a caller-chosen positivity floor.
    /// Integrated states carry step-size error and are admitted at `-1e-6`.
    pub fn with_positivity_floor(matrix: ComplexMatrix, floor: f64) -> Result<Self> {
        if matrix.dim() != 2 && matrix.dim() != 4 {
            return Err(QcorrError::DimensionMismatch {
                expected: 4,
                actual: matrix.dim(),
            });
        }
        let report = validate(&matrix);
        if !report.passes_with_floor(floor) {
            return Err(QcorrError::InvalidState(report));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigensystem(&self.matrix.hermitian_part())
            .expect("hermitian part is Hermitian")
            .eigenvalues
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced state of one qubit. Panics on a single-qubit state.
    pub fn marginal(&self, keep: Subsystem) -> DensityMatrix {
        let m = linalg::partial_trace(&self.matrix, keep).expect("two-qubit state");
        DensityMatrix { matrix: m }
    }

    /// Bloch vector of a single-qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(QcorrError::DimensionMismatch {
                expected: 2,
                actual: self.dim(),
            });
        }
        Ok([1, 2, 3].map(|k| trace_product(&self.matrix, &pauli(k)).re))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> DensityMatrix {
        let m = &(u * &self.matrix) * &u.adjoint();
        DensityMatrix { matrix: m }
    }
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.eigenvalues())
}

/// Local Bloch vectors and correlation matrix of a two-qubit state:
/// `ρ = ¼[I⊗I + (r·σ)⊗I + I⊗(s·σ) + Σ t_mn σ_m⊗σ_n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoForm {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl FanoForm {
    pub fn maximally_mixed() -> Self {
        Self {
            r: [0.0; 3],
            s: [0.0; 3],
            t: [[0.0; 3]; 3],
        }
    }

    /// `Tᵀ T`, symmetric positive semidefinite.
    pub fn t_gram(&self) -> [[f64; 3]; 3] {
        let mut g = [[0.0; 3]; 3];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, gij) in row.iter_mut().enumerate() {
                *gij = (0..3).map(|k| self.t[k][i] * self.t[k][j]).sum();
            }
        }
        g
    }

    /// The same state with the qubits exchanged.
    pub fn swapped(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, tij) in row.iter_mut().enumerate() {
                *tij = self.t[j][i];
            }
        }
        Self {
            r: self.s,
            s: self.r,
            t,
        }
    }

    fn check_box(&self) -> Result<()> {
        let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (what, n) in [("|r|", norm(&self.r)), ("|s|", norm(&self.s))] {
            if n > 1.0 + 1e-9 {
                return Err(QcorrError::OutOfRange { what, value: n });
            }
        }
        for row in &self.t {
            for &x in row {
                if x.abs() > 1.0 + 1e-9 {
                    return Err(QcorrError::OutOfRange {
                        what: "t_mn",
                        value: x,
                    });
                }
            }
        }
        Ok(())
    }
}

fn pauli_pair(m: usize, n: usize) -> ComplexMatrix {
    kron(&pauli(m), &pauli(n))
}

/// Fano components of a two-qubit state; tiny imaginary parts are dropped.
pub fn fano_decompose(rho: &DensityMatrix) -> Result<FanoForm> {
    if rho.dim() != 4 {
        return Err(QcorrError::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let m = rho.matrix();
    let mut f = FanoForm::maximally_mixed();
    for k in 1..=3 {
        f.r[k - 1] = trace_product(m, &pauli_pair(k, 0)).re;
        f.s[k - 1] = trace_product(m, &pauli_pair(0, k)).re;
        for l in 1..=3 {
            f.t[k - 1][l - 1] = trace_product(m, &pauli_pair(k, l)).re;
        }
    }
    Ok(f)
}

/// Inverse of [`fano_decompose`]. A Fano form inside the unit box need not
/// describe a state, so positivity is checked on the result.
pub fn fano_compose(f: &FanoForm) -> Result<DensityMatrix> {
    f.check_box()?;
    let mut m = pauli_pair(0, 0);
    for k in 1..=3 {
        m = &m + &pauli_pair(k, 0).scale_real(f.r[k - 1]);
        m = &m + &pauli_pair(0, k).scale_real(f.s[k - 1]);
        for l in 1..=3 {
            m = &m + &pauli_pair(k, l).scale_real(f.t[k - 1][l - 1]);
        }
    }
    let m = m.scale_real(0.25);
    let min_eigenvalue = hermitian_eigensystem(&m)?.min_eigenvalue();
    if min_eigenvalue < POSITIVITY_FLOOR {
        return Err(QcorrError::NotPsd { min_eigenvalue });
    }
    Ok(DensityMatrix::from_trusted(m))
}

/// Single-qubit state `½(I + a·σ)`.
pub fn bloch_state(a: [f64; 3]) -> Result<DensityMatrix> {
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(QcorrError::OutOfRange {
            what: "Bloch vector length",
            value: norm,
        });
    }
    let mut m = pauli(0);
    for k in 1..=3 {
        m = &m + &pauli(k).scale_real(a[k - 1]);
    }
    Ok(DensityMatrix::from_trusted(m.scale_real(0.5)))
}

/// `ρ(a) ⊗ ρ(b)`.
pub fn product(a: [f64; 3], b: [f64; 3]) -> Result<DensityMatrix> {
    let ra = bloch_state(a)?;
    let rb = bloch_state(b)?;
    Ok(DensityMatrix::from_trusted(kron(ra.matrix(), rb.matrix())))
}

/// Bell projectors: 1 = φ⁺, 2 = φ⁻, 3 = ψ⁺, 4 = ψ⁻.
pub fn bell(k: usize) -> Result<DensityMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    let v = match k {
        1 => [c(h), ZERO, ZERO, c(h)],
        2 => [c(h), ZERO, ZERO, c(-h)],
        3 => [ZERO, c(h), c(h), ZERO],
        4 => [ZERO, c(h), c(-h), ZERO],
        _ => {
            return Err(QcorrError::OutOfRange {
                what: "Bell index",
                value: k as f64,
            })
        }
    };
    Ok(DensityMatrix::from_trusted(ComplexMatrix::outer(&v)))
}

/// Werner state `p|ψ⁻⟩⟨ψ⁻| + (1-p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QcorrError::OutOfRange {
            what: "Werner weight p",
            value: p,
        });
    }
    let singlet = bell(4)?.into_matrix().scale_real(p);
    let mixed = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    Ok(DensityMatrix::from_trusted(&singlet + &mixed))
}

pub fn maximally_mixed() -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::identity(4).scale_real(0.25))
}

/// Seeded Ginibre state `G G† / Tr(G G†)` with standard complex normal `G`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let data = (0..16)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let g = ComplexMatrix::from_row_major(4, data).expect("16 entries");
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::from_trusted(gg.scale_real(1.0 / tr).hermitian_part())
}

/// Serialises a matrix in the plain-text state format: the dimension on the
/// first line, then one `re im` pair per line in row-major order.
pub fn write_state(m: &ComplexMatrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for z in m.as_slice() {
        out.push_str(&format!("{:.17e} {:.17e}\n", z.re, z.im));
    }
    out
}

/// Parses the plain-text state format into a raw matrix (no validation).
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, first) = lines.next().ok_or(QcorrError::Parse {
        line: 1,
        message: "empty state file".into(),
    })?;
    let dim: usize = first.parse().map_err(|_| QcorrError::Parse {
        line,
        message: format!("expected dimension, got `{first}`"),
    })?;
    if dim != 2 && dim != 4 {
        return Err(QcorrError::Parse {
            line,
            message: format!("dimension must be 2 or 4, got {dim}"),
        });
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| QcorrError::Parse {
                line,
                message: format!("bad number `{s}`"),
            })
        };
        match parts.as_slice() {
            [re, im] => data.push(Complex64::new(parse(re)?, parse(im)?)),
            _ => {
                return Err(QcorrError::Parse {
                    line,
                    message: format!("expected `re im`, got `{l}`"),
                })
            }
        }
    }
    if data.len() != dim * dim {
        return Err(QcorrError::Parse {
            line: 0,
            message: format!("expected {} entries, found {}", dim * dim, data.len()),
        });
    }
    ComplexMatrix::from_row_major(dim, data)
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix(text)?)
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_state(&std::fs::read_to_string(path)?)
}
