use crate::error::{QcorrError, Result};
use crate::linalg::{hermitian_eigensystem, kron, pauli, singular_values, ComplexMatrix};
use crate::state::{binary_entropy, DensityMatrix};

/// Wootters concurrence.
///
/// The λ_i (square roots of the spectrum of `ρ^½ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y) ρ^½`)
/// are the singular values of `Wᵀ (σ_y⊗σ_y) W` with `W = V diag(√p)` built
/// from the eigensystem of ρ, since that product's Gram matrix is unitarily
/// similar to the Hermitian form above.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let lambdas = concurrence_lambdas(rho);
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

/// Descending λ_i of the concurrence formula.
pub fn concurrence_lambdas(rho: &DensityMatrix) -> Vec<f64> {
    let es = hermitian_eigensystem(&rho.matrix().hermitian_part()).expect("Hermitian state");
    let n = 4;
    let mut w = ComplexMatrix::zeros(n);
    for k in 0..n {
        let amp = es.eigenvalues[k].max(0.0).sqrt();
        for i in 0..n {
            w[(i, k)] = es.eigenvectors[(i, k)] * amp;
        }
    }
    let yy = kron(&pauli(2), &pauli(2));
    // τ = Wᵀ Y W
    let mut wt = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            wt[(i, j)] = w[(j, i)];
        }
    }
    let tau = &(&wt * &yy) * &w;
    singular_values(&tau)
}

/// Entanglement of formation in bits, `h((1 + √(1-C²))/2)`.
pub fn eof(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(QcorrError::OutOfRange {
            what: "concurrence",
            value: c,
        });
    }
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix_sqrt_psd;
    use crate::state::{bell, maximally_mixed, random_state, werner};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
        let yy = kron(&pauli(2), &pauli(2));
        &(&yy * &rho.conj()) * &yy
    }

    /// The textbook route: eigenvalues of the Hermitian product form.
    fn concurrence_by_hermitian_form(rho: &DensityMatrix) -> f64 {
        let s = matrix_sqrt_psd(rho.matrix()).unwrap();
        let r = &(&s * &spin_flip(rho.matrix())) * &s;
        let es = hermitian_eigensystem(&r.hermitian_part()).unwrap();
        let l: Vec<f64> = es.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn bell_and_mixed() {
        for k in 1..=4 {
            assert!((concurrence(&bell(k).unwrap()) - 1.0).abs() < 1e-12);
        }
        assert_eq!(concurrence(&maximally_mixed()), 0.0);
    }

    #[test]
    fn werner_half() {
        assert!((concurrence(&werner(0.5).unwrap()) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn werner_closed_form_grid() {
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            let got = concurrence(&werner(p).unwrap());
            assert!((got - expected).abs() < 1e-10, "p={p}: {got} vs {expected}");
        }
    }

    #[test]
    fn agrees_with_hermitian_form_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let rho = random_state(&mut rng);
            let a = concurrence(&rho);
            let b = concurrence_by_hermitian_form(&rho);
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn eof_values() {
        assert_eq!(eof(0.0).unwrap(), 0.0);
        assert!((eof(1.0).unwrap() - 1.0).abs() < 1e-15);
        // h((1 + √(1 - 1/16))/2) evaluated independently
        let x: f64 = (1.0 + (15.0f64 / 16.0).sqrt()) / 2.0;
        let h = -x * x.ln() / 2f64.ln() - (1.0 - x) * (1.0 - x).ln() / 2f64.ln();
        assert!((eof(0.25).unwrap() - h).abs() < 1e-14);
        assert!((eof(0.25).unwrap() - 0.1176).abs() < 1e-4);
        assert!(eof(1.2).is_err());
        assert!(eof(-0.1).is_err());
    }

    #[test]
    fn eof_monotone() {
        let mut prev = -1.0;
        for i in 0..=1000 {
            let e = eof(i as f64 / 1000.0).unwrap();
            assert!(e >= prev);
            prev = e;
        }
    }
}
