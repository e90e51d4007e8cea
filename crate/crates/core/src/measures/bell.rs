//! Correlation-matrix functionals: the Horodecki CHSH quantity `M(ρ)`, the
//! teleportation quantity `N(ρ)`, and a grid-search CHSH maximiser used as an
//! independent check on `M`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{singular_values, ComplexMatrix};
use crate::state::{fano_decompose, DensityMatrix, FanoForm};

/// Classical teleportation fidelity bound.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Singular values of the correlation matrix `T`, descending. Their squares
/// are the eigenvalues `u_i` of `TᵀT`.
pub fn correlation_singular_values(f: &FanoForm) -> [f64; 3] {
    let data =
        f.t.iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
    let t = ComplexMatrix::from_row_major(3, data).expect("3x3");
    let sv = singular_values(&t);
    [sv[0], sv[1], sv[2]]
}

/// `M(ρ)`: sum of the two largest eigenvalues of `TᵀT`. CHSH is violated iff `M > 1`.
pub fn bell_m(rho: &DensityMatrix) -> f64 {
    bell_m_from_fano(&fano_decompose(rho).expect("two-qubit state"))
}

pub fn bell_m_from_fano(f: &FanoForm) -> f64 {
    let sv = correlation_singular_values(f);
    sv[0] * sv[0] + sv[1] * sv[1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportFidelity {
    /// `N(ρ) = Σ √u_i`.
    pub n: f64,
    /// `½(1 + N/3)`.
    pub f_max: f64,
}

impl TeleportFidelity {
    /// Beats the classical 2/3 bound.
    pub fn is_useful(&self) -> bool {
        self.n > 1.0
    }
}

pub fn teleport_fidelity(rho: &DensityMatrix) -> TeleportFidelity {
    teleport_fidelity_from_fano(&fano_decompose(rho).expect("two-qubit state"))
}

pub fn teleport_fidelity_from_fano(f: &FanoForm) -> TeleportFidelity {
    let n: f64 = correlation_singular_values(f).iter().sum();
    TeleportFidelity {
        n,
        f_max: 0.5 * (1.0 + n / 3.0),
    }
}

/// Largest CHSH value `E(a,b) + E(a',b) + E(a',b') − E(a,b')` with
/// `E(a,b) = a·T·b`, found by grid search over Bob's settings.
///
/// For fixed Bob directions the optimal Alice directions are
/// `a ∝ T(b − b')`, `a' ∝ T(b + b')`, giving `|T(b−b')| + |T(b+b')|`.
/// Writing `b ± b'` as `2cos(α)c`, `2sin(α)d` with orthonormal `c, d`, the α
/// maximum is `2√(|Tc|² + |Td|²)`. The remaining frame `(c, d)` is scanned on
/// a `resolution × 2·resolution × resolution` angle grid; no eigensolver is
/// involved.
pub fn chsh_bruteforce(rho: &DensityMatrix, resolution: usize) -> f64 {
    let f = fano_decompose(rho).expect("two-qubit state");
    chsh_bruteforce_from_fano(&f, resolution)
}

pub fn chsh_bruteforce_from_fano(f: &FanoForm, resolution: usize) -> f64 {
    let n = resolution.max(24);
    let t = &f.t;
    let apply = |v: [f64; 3]| -> f64 {
        (0..3)
            .map(|i| {
                let x = t[i][0] * v[0] + t[i][1] * v[1] + t[i][2] * v[2];
                x * x
            })
            .sum()
    };
    let mut best: f64 = 0.0;
    for i in 0..n {
        let theta = PI * i as f64 / (n - 1) as f64;
        let (st, ct) = theta.sin_cos();
        for j in 0..2 * n {
            let phi = PI * j as f64 / n as f64;
            let (sp, cp) = phi.sin_cos();
            let c = [st * cp, st * sp, ct];
            let e1 = [ct * cp, ct * sp, -st];
            let e2 = [-sp, cp, 0.0];
            let tc = apply(c);
            for k in 0..n {
                let psi = PI * k as f64 / n as f64;
                let (ss, cs) = psi.sin_cos();
                let d = [
                    cs * e1[0] + ss * e2[0],
                    cs * e1[1] + ss * e2[1],
                    cs * e1[2] + ss * e2[2],
                ];
                best = best.max(tc + apply(d));
            }
        }
    }
    2.0 * best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bell, maximally_mixed, product, werner};

    #[test]
    fn bell_m_examples() {
        assert!((bell_m(&bell(1).unwrap()) - 2.0).abs() < 1e-12);
        assert!((bell_m(&werner(0.6).unwrap()) - 0.72).abs() < 1e-12);
        let ee = product([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
        assert!((bell_m(&ee) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn teleport_examples() {
        let tf = teleport_fidelity(&bell(1).unwrap());
        assert!((tf.n - 3.0).abs() < 1e-12 && (tf.f_max - 1.0).abs() < 1e-12);
        let tf = teleport_fidelity(&maximally_mixed());
        assert!(tf.n.abs() < 1e-15 && (tf.f_max - 0.5).abs() < 1e-15);
        assert!(!tf.is_useful());
        let tf = teleport_fidelity(&werner(0.5).unwrap());
        assert!((tf.f_max - 0.75).abs() < 1e-12);
        assert!(tf.is_useful());
    }

    #[test]
    fn chsh_examples() {
        let tsirelson = 2.0 * 2f64.sqrt();
        assert!((chsh_bruteforce(&bell(1).unwrap(), 48) - tsirelson).abs() < 1e-3);
        assert_eq!(chsh_bruteforce(&maximally_mixed(), 24), 0.0);
        for p in [0.3f64, 0.7, 1.0] {
            let expected = 2.0 * (2.0 * p * p).sqrt();
            let got = chsh_bruteforce(&werner(p).unwrap(), 48);
            assert!((got - expected).abs() < 1e-3, "p={p}: {got} vs {expected}");
        }
    }
}
