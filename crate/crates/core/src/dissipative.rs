//! Two-qubit dissipative dynamics in a broadband squeezed thermal bath.
//!
//! Units: `ħ = k_B = 1`. Times are in units of `1/Γ` when `Γ = 1`.
//!
//! The generator is the Born–Markov/RWA master equation for two dipoles
//! coupled through a common three-dimensional field:
//!
//! ```text
//! dρ/dt = −i[H, ρ]
//!         − ½ Σ_ij Γ_ij (1+Ñ) (ρ S_i⁺S_j⁻ + S_i⁺S_j⁻ρ − 2 S_j⁻ρS_i⁺)
//!         − ½ Σ_ij Γ_ij Ñ     (ρ S_i⁻S_j⁺ + S_i⁻S_j⁺ρ − 2 S_j⁺ρS_i⁻)
//!         + ½ Σ_ij Γ_ij M̃     (ρ S_i⁺S_j⁺ + S_i⁺S_j⁺ρ − 2 S_j⁺ρS_i⁺)
//!         + ½ Σ_ij Γ_ij M̃*    (ρ S_i⁻S_j⁻ + S_i⁻S_j⁻ρ − 2 S_j⁻ρS_i⁻)
//! H = Σ_n ω_n S_n^z + Ω₁₂ (S_1⁺S_2⁻ + S_2⁺S_1⁻)
//! ```
//!
//! with `Γ_ii = Γ`, `Γ_12 = Γ_21 = Γ F(k₀r₁₂)`.

use num_complex::Complex64;

use crate::error::{QcorrError, Result};
use crate::linalg::{kron, ComplexMatrix, I, ONE, ZERO};
use crate::measures::{CorrelationReport, MeasureOptions};
use crate::state::DensityMatrix;

/// Positivity floor for integrated states.
pub const TRAJECTORY_POSITIVITY_FLOOR: f64 = -1e-6;
/// Largest element change tolerated when the step size is halved.
pub const HALVING_TOL: f64 = 1e-8;

/// Mean Planck occupation `1/(e^{ω/T} − 1)`; exactly zero at `T = 0`.
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "frequency",
            value: omega,
        });
    }
    if !(temperature >= 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "temperature",
            value: temperature,
        });
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Squeezed thermal reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub temperature: f64,
    /// Squeezing magnitude `r`; the sign is kept as given.
    pub squeezing: f64,
    /// Squeezing phase `Φ` in radians.
    pub squeezing_phase: f64,
    /// Mean qubit frequency `ω₀ = (ω₁ + ω₂)/2`.
    pub omega0: f64,
}

impl Default for BathSpec {
    fn default() -> Self {
        Self {
            temperature: 0.0,
            squeezing: 0.0,
            squeezing_phase: 0.0,
            omega0: 1.0,
        }
    }
}

impl BathSpec {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn thermal(temperature: f64) -> Self {
        Self {
            temperature,
            ..Self::default()
        }
    }

    pub fn squeezed(temperature: f64, squeezing: f64) -> Self {
        Self {
            temperature,
            squeezing,
            ..Self::default()
        }
    }
}

/// Bath coefficients entering the master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedBath {
    pub n_th: f64,
    /// `Ñ = N_th (cosh²r + sinh²r) + sinh²r`.
    pub n: f64,
    /// `M̃ = −½ sinh(2r) e^{iΦ} (2N_th + 1)`.
    pub m: Complex64,
}

pub fn squeezed_bath_params(bath: &BathSpec) -> Result<SqueezedBath> {
    let n_th = planck_occupation(bath.omega0, bath.temperature)?;
    let r = bath.squeezing;
    let (ch, sh) = (r.cosh(), r.sinh());
    let n = n_th * (ch * ch + sh * sh) + sh * sh;
    let m = Complex64::from_polar(1.0, bath.squeezing_phase)
        * (-0.5 * (2.0 * r).sinh() * (2.0 * n_th + 1.0));
    Ok(SqueezedBath { n_th, n, m })
}

/// `(x cos x − sin x)/x³`, by series where the direct form cancels.
fn cos_sin_cubic(x: f64) -> f64 {
    if x < 1e-2 {
        let x2 = x * x;
        -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0
    } else {
        (x * x.cos() - x.sin()) / (x * x * x)
    }
}

fn check_alignment(a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(QcorrError::OutOfRange {
            what: "dipole alignment (μ̂·r̂₁₂)²",
            value: a,
        });
    }
    Ok(())
}

/// Collective damping factor `F(x)`, `x = k₀r₁₂`, `a = (μ̂·r̂₁₂)²`:
/// `F = 3/2 [(1−a) sin x/x + (1−3a)(cos x/x² − sin x/x³)]`.
pub fn geometric_factor(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "separation k0*r12",
            value: x,
        });
    }
    check_alignment(a)?;
    if x < 1e-4 {
        return Ok(1.0);
    }
    let sinc = x.sin() / x;
    Ok(1.5 * ((1.0 - a) * sinc + (1.0 - 3.0 * a) * cos_sin_cubic(x)))
}

/// Dipole–dipole shift `Ω₁₂ = 3/4 Γ [−(1−a) cos x/x + (1−3a)(sin x/x² + cos x/x³)]`.
pub fn collective_shift(x: f64, a: f64, gamma: f64) -> Result<f64> {
    if !(x >= 1e-3) {
        return Err(QcorrError::SeparationTooSmall { x });
    }
    check_alignment(a)?;
    let (s, c) = x.sin_cos();
    Ok(0.75 * gamma * (-(1.0 - a) * c / x + (1.0 - 3.0 * a) * (s / (x * x) + c / (x * x * x))))
}

/// `k₀r₁₂` from a physical separation and resonant wavelength.
pub fn dimensionless_separation(r12: f64, lambda0: f64) -> f64 {
    2.0 * std::f64::consts::PI * r12 / lambda0
}

/// How the collective rates `Γ₁₂`, `Ω₁₂` are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// From the dipole geometry: `x = k₀r₁₂`, `alignment = (μ̂·r̂₁₂)²`.
    Geometric { x: f64, alignment: f64 },
    /// Given directly, e.g. zero for fully independent qubits.
    Explicit { gamma12: f64, omega12: f64 },
}

impl Coupling {
    pub const INDEPENDENT: Coupling = Coupling::Explicit {
        gamma12: 0.0,
        omega12: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeParams {
    /// Single-qubit spontaneous emission rate `Γ`.
    pub gamma: f64,
    /// `ω₁ − ω₂`; zero for identical qubits.
    pub detuning: f64,
    pub coupling: Coupling,
    pub bath: BathSpec,
}

impl Default for DissipativeParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            detuning: 0.0,
            coupling: Coupling::Geometric {
                x: 1.0,
                alignment: 0.0,
            },
            bath: BathSpec::default(),
        }
    }
}

/// Rates derived from [`DissipativeParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub gamma: f64,
    pub gamma12: f64,
    pub omega12: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub bath: SqueezedBath,
}

impl DissipativeParams {
    pub fn with_separation(mut self, x: f64) -> Self {
        let alignment = match self.coupling {
            Coupling::Geometric { alignment, .. } => alignment,
            Coupling::Explicit { .. } => 0.0,
        };
        self.coupling = Coupling::Geometric { x, alignment };
        self
    }

    pub fn with_bath(mut self, bath: BathSpec) -> Self {
        self.bath = bath;
        self
    }

    /// Collective damping rate `Γ₁₂`. Defined down to `x → 0`, unlike `Ω₁₂`.
    pub fn collective_rate(&self) -> Result<f64> {
        if !(self.gamma >= 0.0) {
            return Err(QcorrError::OutOfRange {
                what: "Γ",
                value: self.gamma,
            });
        }
        match self.coupling {
            Coupling::Geometric { x, alignment } => {
                Ok(self.gamma * geometric_factor(x, alignment)?)
            }
            Coupling::Explicit { gamma12, .. } => {
                if gamma12.abs() > self.gamma + 1e-12 {
                    return Err(QcorrError::OutOfRange {
                        what: "|Γ12| (must not exceed Γ)",
                        value: gamma12,
                    });
                }
                Ok(gamma12)
            }
        }
    }

    pub fn coefficients(&self) -> Result<Coefficients> {
        let gamma12 = self.collective_rate()?;
        let omega12 = match self.coupling {
            Coupling::Geometric { x, alignment } => collective_shift(x, alignment, self.gamma)?,
            Coupling::Explicit { omega12, .. } => omega12,
        };
        Ok(Coefficients {
            gamma: self.gamma,
            gamma12,
            omega12,
            omega1: self.bath.omega0 + 0.5 * self.detuning,
            omega2: self.bath.omega0 - 0.5 * self.detuning,
            bath: squeezed_bath_params(&self.bath)?,
        })
    }
}

/// Single-qubit raising operator `S⁺ = |e⟩⟨g|` (with `|0⟩ = |e⟩`).
fn raising() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, vec![ZERO, ONE, ZERO, ZERO]).unwrap()
}

fn sz() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[0.5, -0.5])
}

fn on_qubit(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    if qubit == 0 {
        kron(op, &id)
    } else {
        kron(&id, op)
    }
}

/// One term `c · (ρ A B + A B ρ − 2 B ρ A)`.
#[derive(Debug, Clone)]
struct DissipatorTerm {
    coeff: Complex64,
    ab: ComplexMatrix,
    a: ComplexMatrix,
    b: ComplexMatrix,
}

/// The master-equation generator for fixed parameters.
#[derive(Debug, Clone)]
pub struct Generator {
    hamiltonian: ComplexMatrix,
    terms: Vec<DissipatorTerm>,
    pub coefficients: Coefficients,
}

impl Generator {
    pub fn new(params: &DissipativeParams) -> Result<Self> {
        let c = params.coefficients()?;
        let sp = [on_qubit(&raising(), 0), on_qubit(&raising(), 1)];
        let sm = [sp[0].adjoint(), sp[1].adjoint()];
        let szs = [on_qubit(&sz(), 0), on_qubit(&sz(), 1)];

        let hopping = &(&sp[0] * &sm[1]) + &(&sp[1] * &sm[0]);
        let hamiltonian = &(&szs[0].scale_real(c.omega1) + &szs[1].scale_real(c.omega2))
            + &hopping.scale_real(c.omega12);

        let rates = [[c.gamma, c.gamma12], [c.gamma12, c.gamma]];
        let n = c.bath.n;
        let m = c.bath.m;
        let real = |x: f64| Complex64::new(x, 0.0);
        let mut terms = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let g = rates[i][j];
                if g == 0.0 {
                    continue;
                }
                // (A, B, weight) so that the term reads weight·(ρAB + ABρ − 2BρA)
                let parts = [
                    (&sp[i], &sm[j], real(-0.5 * g * (1.0 + n))),
                    (&sm[i], &sp[j], real(-0.5 * g * n)),
                    (&sp[i], &sp[j], m * (0.5 * g)),
                    (&sm[i], &sm[j], m.conj() * (0.5 * g)),
                ];
                for (a, b, coeff) in parts {
                    if coeff == ZERO {
                        continue;
                    }
                    terms.push(DissipatorTerm {
                        coeff,
                        ab: a * b,
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
        Ok(Self {
            hamiltonian,
            terms,
            coefficients: c,
        })
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    /// `dρ/dt` for an arbitrary 4×4 operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.hamiltonian.commutator(rho).scale(-I);
        for t in &self.terms {
            let mut x = &(rho * &t.ab) + &(&t.ab * rho);
            x = &x - &(&(&t.b * rho) * &t.a).scale_real(2.0);
            out = &out + &x.scale(t.coeff);
        }
        out
    }

    /// The generator as a 16×16 matrix acting on row-major vectorised operators.
    pub fn superoperator(&self) -> ComplexMatrix {
        let mut l = ComplexMatrix::zeros(16);
        for k in 0..4 {
            for m in 0..4 {
                let mut e = ComplexMatrix::zeros(4);
                e[(k, m)] = ONE;
                let col = self.apply(&e);
                for (row, z) in col.as_slice().iter().enumerate() {
                    l[(row, 4 * k + m)] = *z;
                }
            }
        }
        l
    }
}

/// `dρ/dt` of the dissipative master equation.
pub fn liouvillian_rhs(rho: &DensityMatrix, params: &DissipativeParams) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(QcorrError::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    Ok(Generator::new(params)?.apply(rho.matrix()))
}

type Vec16 = [Complex64; 16];

fn matvec(l: &ComplexMatrix, v: &Vec16) -> Vec16 {
    let mut out = [ZERO; 16];
    let a = l.as_slice();
    for (i, o) in out.iter_mut().enumerate() {
        let row = &a[16 * i..16 * i + 16];
        let mut acc = ZERO;
        for (x, y) in row.iter().zip(v) {
            acc += x * y;
        }
        *o = acc;
    }
    out
}

/// One classical RK4 step of the linear system `v' = L v` as a matrix:
/// `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`.
fn rk4_step_matrix(l: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let hl = l.scale_real(h);
    let mut term = ComplexMatrix::identity(l.dim());
    let mut out = term.clone();
    for k in 1..=4 {
        term = (&term * &hl).scale_real(1.0 / k as f64);
        out = &out + &term;
    }
    out
}

/// `P^n v` by repeated squaring.
fn apply_power(p: &ComplexMatrix, mut n: usize, v: &Vec16) -> Vec16 {
    let mut out = *v;
    let mut base = p.clone();
    while n > 0 {
        if n & 1 == 1 {
            out = matvec(&base, &out);
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    out
}

/// Fixed-step RK4 from `t = 0`, recording the state at each sample time.
/// Each interval between samples is split into equal steps no longer than `dt`.
fn integrate(l: &ComplexMatrix, v0: &Vec16, times: &[f64], dt: f64) -> Vec<Vec16> {
    let mut out = Vec::with_capacity(times.len());
    let mut v = *v0;
    let mut t = 0.0;
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            v = apply_power(&rk4_step_matrix(l, h), steps, &v);
        }
        t = target;
        out.push(v);
    }
    out
}

/// Largest element difference; infinite if either run is not finite.
fn max_change(a: &[Vec16], b: &[Vec16]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
        .fold(
            0.0,
            |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) },
        )
}

/// Step size expected to pass the halving test over `[0, t_end]`.
///
/// Uses the RK4 global error estimate `t λ⁵ h⁴ / 120` with `λ` the row-sum
/// norm of the generator, targeting a tenth of the acceptance tolerance.
pub fn suggest_dt(params: &DissipativeParams, t_end: f64) -> Result<f64> {
    let l = Generator::new(params)?.superoperator();
    let lambda = (0..16)
        .map(|i| (0..16).map(|j| l[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1e-12);
    let h = (120.0 * 0.1 * HALVING_TOL / (t_end.max(1.0) * lambda.powi(5))).powf(0.25);
    Ok(h.min(0.01))
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub params: DissipativeParams,
    /// Step size of the accepted run.
    pub dt: f64,
    /// Largest element change against the run at twice the step.
    pub halving_change: f64,
    pub min_eigenvalues: Vec<f64>,
}

/// Evolves to `t_end`, recording the initial and final states.
pub fn evolve(
    rho0: &DensityMatrix,
    params: &DissipativeParams,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "t_end",
            value: t_end,
        });
    }
    evolve_sampled(rho0, params, &[0.0, t_end], dt)
}

/// Evolves through ascending sample `times` (all `≥ 0`).
///
/// `dt` is first capped at the smallest gap between samples. The run at `dt` is compared with one at `dt/2`; if any stored element
/// moves by `1e-8` or more the comparison is repeated at `dt/2` vs `dt/4`.
/// A second failure is [`QcorrError::StepSizeTooLarge`]. The finer run of
/// the accepted pair is returned.
pub fn evolve_sampled(
    rho0: &DensityMatrix,
    params: &DissipativeParams,
    times: &[f64],
    dt: f64,
) -> Result<Trajectory> {
    if rho0.dim() != 4 {
        return Err(QcorrError::DimensionMismatch {
            expected: 4,
            actual: rho0.dim(),
        });
    }
    if !(dt > 0.0) {
        return Err(QcorrError::OutOfRange {
            what: "dt",
            value: dt,
        });
    }
    if times.is_empty() || times[0] < 0.0 || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(QcorrError::Config(
            "sample times must be non-negative and ascending".into(),
        ));
    }
    // Halving only refines the integration if dt does not exceed every span.
    let dt = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(times[0]))
        .filter(|&s| s > 0.0)
        .fold(dt, f64::min);
    let l = Generator::new(params)?.superoperator();
    let mut v0 = [ZERO; 16];
    v0.copy_from_slice(rho0.matrix().as_slice());

    let coarse = integrate(&l, &v0, times, dt);
    let fine = integrate(&l, &v0, times, dt / 2.0);
    let mut change = max_change(&coarse, &fine);
    let (accepted, used_dt) = if change < HALVING_TOL {
        (fine, dt / 2.0)
    } else {
        let finer = integrate(&l, &v0, times, dt / 4.0);
        change = max_change(&fine, &finer);
        if change >= HALVING_TOL {
            return Err(QcorrError::StepSizeTooLarge { dt, change });
        }
        (finer, dt / 4.0)
    };

    let mut states = Vec::with_capacity(times.len());
    let mut min_eigenvalues = Vec::with_capacity(times.len());
    for v in accepted {
        let m = ComplexMatrix::from_row_major(4, v.to_vec())?;
        let rho = DensityMatrix::with_positivity_floor(m, TRAJECTORY_POSITIVITY_FLOOR)?;
        min_eigenvalues.push(*rho.eigenvalues().last().unwrap());
        states.push(rho);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        params: *params,
        dt: used_dt,
        halving_change: change,
        min_eigenvalues,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub report: CorrelationReport,
}

/// All correlation measures along a trajectory.
pub fn correlation_trajectory(
    rho0: &DensityMatrix,
    params: &DissipativeParams,
    times: &[f64],
    dt: f64,
    opts: &MeasureOptions,
) -> Result<Vec<TrajectoryPoint>> {
    let traj = evolve_sampled(rho0, params, times, dt)?;
    Ok(traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| TrajectoryPoint {
            t,
            report: CorrelationReport::compute(rho, opts),
        })
        .collect())
}
