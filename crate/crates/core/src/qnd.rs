//! Quantum non-demolition (pure dephasing) two-qubit channel.
//!
//! The system–reservoir coupling commutes with the qubit Hamiltonian, so
//! populations in the `S^z` product basis never change while coherences pick
//! up decay and phase factors. The time dependence is supplied by a
//! [`QndKernel`]; [`default_kernel`] is a Markovian choice with linear decay.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dissipative::{squeezed_bath_params, BathSpec};
use crate::error::{QcorrError, Result};
use crate::linalg::{hermitian_eigensystem, ComplexMatrix, ONE, ZERO};
use crate::measures::{CorrelationReport, MeasureOptions};
use crate::state::DensityMatrix;

pub const CHOI_TOL: f64 = 1e-10;

/// Whether both qubits dephase through one shared field mode or separate ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Collective,
    Independent,
}

impl Regime {
    /// `r₁₂/λ ≥ 1` is independent, anything shorter collective.
    pub fn from_separation(r12: f64, lambda: f64) -> Self {
        if r12 / lambda >= 1.0 {
            Regime::Independent
        } else {
            Regime::Collective
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Collective => "collective",
            Regime::Independent => "independent",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collective" => Ok(Regime::Collective),
            "independent" => Ok(Regime::Independent),
            other => Err(QcorrError::Config(format!("unknown regime `{other}`"))),
        }
    }
}

type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Decoherence exponent `Δ(t)`, phase `Φ_ph(t)` and regime.
#[derive(Clone)]
pub struct QndKernel {
    decay: TimeFn,
    phase: TimeFn,
    pub regime: Regime,
}

impl fmt::Debug for QndKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QndKernel")
            .field("regime", &self.regime)
            .field("decay(1)", &(self.decay)(1.0))
            .field("phase(1)", &(self.phase)(1.0))
            .finish()
    }
}

impl QndKernel {
    /// A user-supplied kernel. No checks are applied; see [`QndKernel::check_on_grid`].
    pub fn new(
        decay: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phase: impl Fn(f64) -> f64 + Send + Sync + 'static,
        regime: Regime,
    ) -> Self {
        Self {
            decay: Arc::new(decay),
            phase: Arc::new(phase),
            regime,
        }
    }

    pub fn decay(&self, t: f64) -> f64 {
        (self.decay)(t)
    }

    pub fn phase(&self, t: f64) -> f64 {
        (self.phase)(t)
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    /// Checks `Δ(0) = Φ(0) = 0`, `Δ ≥ 0` and `Δ` nondecreasing on ascending `times`.
    pub fn check_on_grid(&self, times: &[f64]) -> Result<()> {
        let d0 = self.decay(0.0);
        if d0 != 0.0 {
            return Err(QcorrError::OutOfRange {
                what: "Δ(0)",
                value: d0,
            });
        }
        let p0 = self.phase(0.0);
        if p0 != 0.0 {
            return Err(QcorrError::OutOfRange {
                what: "Φ_ph(0)",
                value: p0,
            });
        }
        let mut prev = 0.0;
        for &t in times {
            let d = self.decay(t);
            if !(d >= prev) {
                return Err(QcorrError::OutOfRange {
                    what: "Δ(t) (must be nonnegative and nondecreasing)",
                    value: d,
                });
            }
            prev = d;
        }
        Ok(())
    }
}

/// Markovian kernel `Δ(t) = γ₀ (2Ñ + 1) t`, `Φ_ph = 0`.
pub fn default_kernel(bath: &BathSpec, gamma0: f64, regime: Regime) -> Result<QndKernel> {
    if !(gamma0 > 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "γ0",
            value: gamma0,
        });
    }
    let n = squeezed_bath_params(bath)?.n;
    let rate = gamma0 * (2.0 * n + 1.0);
    Ok(QndKernel::new(move |t| rate * t, |_| 0.0, regime))
}

/// `S^z` eigenvalues `(m¹, m²)` of basis state `i` in `{ee, eg, ge, gg}`.
fn spins(i: usize) -> [f64; 2] {
    let m = |bit: usize| if bit == 0 { 0.5 } else { -0.5 };
    [m((i >> 1) & 1), m(i & 1)]
}

/// Element-wise multipliers of the channel at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QndChannelMatrix {
    pub m: [[Complex64; 4]; 4],
}

impl QndChannelMatrix {
    pub fn new(kernel: &QndKernel, t: f64) -> Self {
        let delta = kernel.decay(t);
        let phi = kernel.phase(t);
        let mut m = [[ONE; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            let si = spins(i);
            for (j, x) in row.iter_mut().enumerate() {
                if i == j {
                    continue;
                }
                let sj = spins(j);
                let (mi, mj) = (si[0] + si[1], sj[0] + sj[1]);
                let exponent = match kernel.regime {
                    Regime::Independent => (si[0] - sj[0]).powi(2) + (si[1] - sj[1]).powi(2),
                    Regime::Collective => (mi - mj).powi(2),
                };
                *x = Complex64::from_polar((-exponent * delta).exp(), (mi * mi - mj * mj) * phi);
            }
        }
        Self { m }
    }

    /// Applies the multipliers to an arbitrary 4×4 operator. Diagonal entries are copied.
    pub fn apply(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let mut out = op.clone();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    out[(i, j)] = op[(i, j)] * self.m[i][j];
                }
            }
        }
        out
    }
}

pub fn apply_qnd_channel(
    rho0: &DensityMatrix,
    kernel: &QndKernel,
    t: f64,
) -> Result<DensityMatrix> {
    if rho0.dim() != 4 {
        return Err(QcorrError::DimensionMismatch {
            expected: 4,
            actual: rho0.dim(),
        });
    }
    if !(t >= 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "t",
            value: t,
        });
    }
    DensityMatrix::new(QndChannelMatrix::new(kernel, t).apply(rho0.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiReport {
    pub min_eigenvalue: f64,
    /// `max |Tr E(|k⟩⟨l|) − δ_kl|`.
    pub trace_residual: f64,
}

impl ChoiReport {
    pub fn passes(&self) -> bool {
        self.min_eigenvalue >= -CHOI_TOL && self.trace_residual < CHOI_TOL
    }
}

/// The 16×16 Choi matrix `Σ_kl |k⟩⟨l| ⊗ E(|k⟩⟨l|)`.
pub fn choi_matrix(kernel: &QndKernel, t: f64) -> ComplexMatrix {
    let ch = QndChannelMatrix::new(kernel, t);
    let mut choi = ComplexMatrix::zeros(16);
    for k in 0..4 {
        for l in 0..4 {
            let mut e = ComplexMatrix::zeros(4);
            e[(k, l)] = ONE;
            let out = ch.apply(&e);
            for a in 0..4 {
                for b in 0..4 {
                    choi[(4 * k + a, 4 * l + b)] = out[(a, b)];
                }
            }
        }
    }
    choi
}

pub fn choi_cptp_check(kernel: &QndKernel, t: f64) -> ChoiReport {
    let choi = choi_matrix(kernel, t);
    let min_eigenvalue = hermitian_eigensystem(&choi.hermitian_part())
        .map(|es| es.min_eigenvalue())
        .unwrap_or(f64::NEG_INFINITY);
    let mut trace_residual: f64 = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            let tr = (0..4).fold(ZERO, |acc, a| acc + choi[(4 * k + a, 4 * l + a)]);
            let expected = if k == l { ONE } else { ZERO };
            trace_residual = trace_residual.max((tr - expected).norm());
        }
    }
    ChoiReport {
        min_eigenvalue,
        trace_residual,
    }
}

/// Measures of the channel output along a parameter grid. `point` maps a
/// grid value to the kernel and evolution time used there.
pub fn qnd_correlation_sweep<F>(
    rho0: &DensityMatrix,
    grid: &[f64],
    point: F,
    opts: &MeasureOptions,
) -> Result<Vec<CorrelationReport>>
where
    F: Fn(f64) -> Result<(QndKernel, f64)>,
{
    grid.iter()
        .map(|&x| {
            let (kernel, t) = point(x)?;
            let rho = apply_qnd_channel(rho0, &kernel, t)?;
            Ok(CorrelationReport::compute(&rho, opts))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bell, product, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const PLUS: [f64; 3] = [1.0, 0.0, 0.0];

    fn kernel(regime: Regime) -> QndKernel {
        default_kernel(&BathSpec::squeezed(1.0, 0.5), 1.0, regime).unwrap()
    }

    #[test]
    fn default_kernel_values() {
        let k = default_kernel(&BathSpec::vacuum(), 0.7, Regime::Independent).unwrap();
        assert_eq!(k.decay(0.0), 0.0);
        assert!((k.decay(2.0) - 1.4).abs() < 1e-15);
        assert_eq!(k.phase(3.0), 0.0);
        let mut prev = 0.0;
        for i in 0..=10 {
            let k = default_kernel(
                &BathSpec::squeezed(0.5, -0.2 * i as f64),
                1.0,
                Regime::Collective,
            )
            .unwrap();
            assert!(k.decay(1.0) > prev);
            prev = k.decay(1.0);
        }
        assert!(default_kernel(&BathSpec::vacuum(), 0.0, Regime::Collective).is_err());
        assert!(kernel(Regime::Collective)
            .check_on_grid(&[0.0, 0.5, 1.0])
            .is_ok());
        let bad = QndKernel::new(|t| -t, |_| 0.0, Regime::Collective);
        assert!(bad.check_on_grid(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn identity_at_zero_time() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_state(&mut rng);
        for regime in [Regime::Collective, Regime::Independent] {
            let out = apply_qnd_channel(&rho, &kernel(regime), 0.0).unwrap();
            assert_eq!(out.matrix(), rho.matrix());
        }
    }

    #[test]
    fn populations_invariant_and_purity_nonincreasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let rho = random_state(&mut rng);
            for regime in [Regime::Collective, Regime::Independent] {
                let k = QndKernel::new(|t| 0.8 * t, |t| 0.3 * t, regime);
                for t in [0.1, 1.0, 4.0] {
                    let out = apply_qnd_channel(&rho, &k, t).unwrap();
                    assert_eq!(out.matrix().diagonal(), rho.matrix().diagonal());
                    assert!(out.purity() <= rho.purity() + 1e-15);
                }
            }
        }
    }

    #[test]
    fn collective_decoherence_free_coherence() {
        let rho = bell(3).unwrap();
        let k = kernel(Regime::Collective);
        for t in [0.5, 5.0, 50.0] {
            let out = apply_qnd_channel(&rho, &k, t).unwrap();
            assert_eq!(out.matrix()[(1, 2)], rho.matrix()[(1, 2)]);
            assert_eq!(out.matrix()[(2, 1)], rho.matrix()[(2, 1)]);
        }
        let out = apply_qnd_channel(&rho, &kernel(Regime::Independent), 1.0).unwrap();
        assert!(out.matrix()[(1, 2)].norm() < rho.matrix()[(1, 2)].norm());
    }

    #[test]
    fn independent_product_loses_purity() {
        let pp = product(PLUS, PLUS).unwrap();
        let out = apply_qnd_channel(&pp, &kernel(Regime::Independent), 0.1).unwrap();
        assert!(out.purity() < pp.purity() - 1e-6);
    }

    #[test]
    fn semigroup() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_state(&mut rng);
        for regime in [Regime::Collective, Regime::Independent] {
            let k = kernel(regime);
            let two_step =
                apply_qnd_channel(&apply_qnd_channel(&rho, &k, 0.3).unwrap(), &k, 0.45).unwrap();
            let one_step = apply_qnd_channel(&rho, &k, 0.75).unwrap();
            assert!(two_step.matrix().max_abs_diff(one_step.matrix()) < 1e-12);
        }
    }

    #[test]
    fn choi_examples() {
        let k = kernel(Regime::Independent);
        let r = choi_cptp_check(&k, 0.0);
        assert!(r.passes());
        assert!(r.min_eigenvalue.abs() < 1e-12);
        let c = choi_matrix(&k, 0.0);
        let es = hermitian_eigensystem(&c).unwrap();
        assert!((es.eigenvalues[0] - 4.0).abs() < 1e-12);
        assert!(choi_cptp_check(&k, 1.0).passes());

        let amplifying = QndKernel::new(|t| -t, |_| 0.0, Regime::Collective);
        let r = choi_cptp_check(&amplifying, 1.0);
        assert!(!r.passes());
        assert!(r.min_eigenvalue < -CHOI_TOL);
    }

    #[test]
    fn regime_helper_boundary() {
        assert_eq!(Regime::from_separation(1.0, 1.0), Regime::Independent);
        assert_eq!(Regime::from_separation(0.999, 1.0), Regime::Collective);
        assert_eq!("collective".parse::<Regime>().unwrap(), Regime::Collective);
    }

    #[test]
    fn sweep_rows() {
        let rho = product(PLUS, PLUS).unwrap();
        let opts = MeasureOptions::default();
        let grid = [0.0, 0.5, 1.0, 2.0];
        let rows =
            qnd_correlation_sweep(&rho, &grid, |t| Ok((kernel(Regime::Collective), t)), &opts)
                .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], CorrelationReport::compute(&rho, &opts));
    }
}
