//! Projective-measurement discord, classical correlation and mutual information.
//!
//! The conditional states are evaluated in Fano form: measuring the Bloch axis
//! `n` on the measured qubit leaves the other qubit with Bloch vector
//! `(r ± T n)/(1 ± s·n)` with probability `(1 ± s·n)/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, Subsystem};
use crate::state::{fano_decompose, qubit_entropy, von_neumann_entropy, DensityMatrix, FanoForm};

/// Outcomes below this probability contribute nothing to the conditional entropy.
const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

pub const COARSE_GRID: usize = 64;
pub const REFINE_MAX_EVALS: usize = 500;
pub const REFINE_TOL: f64 = 1e-12;

/// Rank-one projective measurement
/// `{cosθ|0⟩ + e^{iφ}sinθ|1⟩, e^{−iφ}sinθ|0⟩ − cosθ|1⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub const COMPUTATIONAL: MeasurementBasis = MeasurementBasis {
        theta: 0.0,
        phi: 0.0,
    };

    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = Complex64::from_polar(1.0, self.phi);
        [
            [Complex64::new(c, 0.0), e * s],
            [e.conj() * s, Complex64::new(-c, 0.0)],
        ]
    }

    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        self.vectors().map(|v| ComplexMatrix::outer(&v))
    }

    /// Bloch axis of the first projector; the second is its antipode.
    pub fn axis(&self) -> [f64; 3] {
        let (s2, c2) = (2.0 * self.theta).sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [s2 * cp, s2 * sp, c2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscordMode {
    /// Computational-basis measurement only.
    FixedBasis,
    /// Minimised over all projective measurements.
    Optimized,
}

impl DiscordMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiscordMode::FixedBasis => "fixed-basis",
            DiscordMode::Optimized => "optimized",
        }
    }
}

impl std::str::FromStr for DiscordMode {
    type Err = crate::error::QcorrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed-basis" | "fixed" => Ok(DiscordMode::FixedBasis),
            "optimized" | "optimised" => Ok(DiscordMode::Optimized),
            other => Err(crate::error::QcorrError::Config(format!(
                "unknown discord mode `{other}`"
            ))),
        }
    }
}

/// Fano form oriented so that the measured qubit is the second one.
fn oriented(f: &FanoForm, measured: Subsystem) -> FanoForm {
    match measured {
        Subsystem::Second => *f,
        Subsystem::First => f.swapped(),
    }
}

/// `Σ_j p_j H(ρ_{X|j})` for measurement axis `n` on the second qubit of `f`.
fn conditional_entropy_axis(f: &FanoForm, n: [f64; 3]) -> f64 {
    let sn = f.s[0] * n[0] + f.s[1] * n[1] + f.s[2] * n[2];
    let tn = [0, 1, 2].map(|i| f.t[i][0] * n[0] + f.t[i][1] * n[1] + f.t[i][2] * n[2]);
    let mut h = 0.0;
    for sign in [1.0, -1.0] {
        let w = 1.0 + sign * sn;
        let p = 0.5 * w;
        if p < MIN_OUTCOME_PROBABILITY {
            continue;
        }
        let v = [0, 1, 2].map(|i| f.r[i] + sign * tn[i]);
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() / w;
        h += p * qubit_entropy(norm);
    }
    h
}

fn conditional_entropy_oriented(f: &FanoForm, basis: MeasurementBasis) -> f64 {
    conditional_entropy_axis(f, basis.axis())
}

/// Conditional entropy of the unmeasured qubit after measuring `measured` in `basis`.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    basis: MeasurementBasis,
    measured: Subsystem,
) -> f64 {
    let f = oriented(&fano_decompose(rho).expect("two-qubit state"), measured);
    conditional_entropy_oriented(&f, basis)
}

/// Minimum conditional entropy over projective measurements: a 64×64 grid on
/// `θ ∈ [0, π/2], φ ∈ [0, π)` seeds a Nelder–Mead refinement.
pub fn minimize_conditional_entropy(
    rho: &DensityMatrix,
    measured: Subsystem,
) -> (MeasurementBasis, f64) {
    let f = oriented(&fano_decompose(rho).expect("two-qubit state"), measured);
    minimize_oriented(&f)
}

fn minimize_oriented(f: &FanoForm) -> (MeasurementBasis, f64) {
    let objective =
        |x: [f64; 2]| conditional_entropy_oriented(f, MeasurementBasis::new(x[0], x[1]));
    let n = COARSE_GRID;
    let d_theta = 0.5 * PI / (n - 1) as f64;
    let d_phi = PI / n as f64;
    let mut best = ([0.0, 0.0], objective([0.0, 0.0]));
    for i in 0..n {
        for j in 0..n {
            let x = [i as f64 * d_theta, j as f64 * d_phi];
            let v = objective(x);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    let refined = nelder_mead(
        objective,
        best.0,
        [d_theta, d_phi],
        REFINE_TOL,
        REFINE_MAX_EVALS,
    );
    let (x, v) = if refined.1 < best.1 { refined } else { best };
    (MeasurementBasis::new(x[0], x[1]), v)
}

/// Two-dimensional Nelder–Mead with standard coefficients.
fn nelder_mead(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: [f64; 2],
    tol: f64,
    max_evals: usize,
) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(&f);
    let mut evals = 3;
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    while evals < max_evals {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);
        if values[2] - values[0] <= tol {
            break;
        }
        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            evals += 1;
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, f(c))
            } else {
                let c = lerp(centroid, simplex[2], 0.5);
                (c, f(c))
            };
            evals += 1;
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
                evals += 2;
            }
        }
    }
    let k = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    (simplex[k], values[k])
}

/// Entropies shared by the discord-type quantities.
struct Entropies {
    joint: f64,
    unmeasured: f64,
    measured: f64,
}

fn entropies(f: &FanoForm, joint: f64) -> Entropies {
    let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    Entropies {
        joint,
        unmeasured: qubit_entropy(norm(&f.r)),
        measured: qubit_entropy(norm(&f.s)),
    }
}

/// All projective-measurement correlation quantities of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordSummary {
    pub mutual_info: f64,
    pub discord_fixed: f64,
    pub discord_opt: f64,
    pub optimal_basis: MeasurementBasis,
}

impl DiscordSummary {
    pub fn discord(&self, mode: DiscordMode) -> f64 {
        match mode {
            DiscordMode::FixedBasis => self.discord_fixed,
            DiscordMode::Optimized => self.discord_opt,
        }
    }

    pub fn classical_correlation(&self, mode: DiscordMode) -> f64 {
        self.mutual_info - self.discord(mode)
    }
}

pub fn discord_summary(rho: &DensityMatrix, measured: Subsystem) -> DiscordSummary {
    let f = oriented(&fano_decompose(rho).expect("two-qubit state"), measured);
    let e = entropies(&f, von_neumann_entropy(rho));
    let base = e.measured - e.joint;
    let fixed = conditional_entropy_oriented(&f, MeasurementBasis::COMPUTATIONAL);
    let (basis, opt) = minimize_oriented(&f);
    let opt = opt.min(fixed);
    DiscordSummary {
        mutual_info: (e.unmeasured + e.measured - e.joint).max(0.0),
        discord_fixed: (base + fixed).max(0.0),
        discord_opt: (base + opt).max(0.0),
        optimal_basis: basis,
    }
}

/// `D = H(Y) − H(X,Y) + H(X|{π^Y})` with `Y` the measured qubit.
pub fn discord(rho: &DensityMatrix, mode: DiscordMode, measured: Subsystem) -> f64 {
    let f = oriented(&fano_decompose(rho).expect("two-qubit state"), measured);
    let e = entropies(&f, von_neumann_entropy(rho));
    let cond = match mode {
        DiscordMode::FixedBasis => {
            conditional_entropy_oriented(&f, MeasurementBasis::COMPUTATIONAL)
        }
        DiscordMode::Optimized => minimize_oriented(&f).1.min(conditional_entropy_oriented(
            &f,
            MeasurementBasis::COMPUTATIONAL,
        )),
    };
    (e.measured - e.joint + cond).max(0.0)
}

/// `I = H(X) + H(Y) − H(X,Y)`.
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    let f = fano_decompose(rho).expect("two-qubit state");
    let e = entropies(&f, von_neumann_entropy(rho));
    (e.unmeasured + e.measured - e.joint).max(0.0)
}

/// `I − D` for the same mode and measured qubit.
pub fn classical_correlation(rho: &DensityMatrix, mode: DiscordMode, measured: Subsystem) -> f64 {
    mutual_information(rho) - discord(rho, mode, measured)
}
