//! Correlation measures of two-qubit states and the three-way classifier.

mod bell;
mod discord;
mod entanglement;

use std::fmt;
use std::str::FromStr;

pub use bell::{
    bell_m, bell_m_from_fano, chsh_bruteforce, chsh_bruteforce_from_fano,
    correlation_singular_values, teleport_fidelity, teleport_fidelity_from_fano, TeleportFidelity,
    CLASSICAL_FIDELITY,
};
pub use discord::{
    classical_correlation, conditional_entropy, discord, discord_summary,
    minimize_conditional_entropy, mutual_information, DiscordMode, DiscordSummary,
    MeasurementBasis, COARSE_GRID, REFINE_MAX_EVALS,
};
pub use entanglement::{concurrence, concurrence_lambdas, eof};

use crate::error::QcorrError;
use crate::linalg::Subsystem;
use crate::state::{fano_decompose, DensityMatrix};

pub const DEFAULT_EPS_C: f64 = 1e-6;
pub const DEFAULT_EPS_D: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Entangled,
    NonclassicalSeparable,
    Classical,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Entangled => "Entangled",
            Label::NonclassicalSeparable => "NonclassicalSeparable",
            Label::Classical => "Classical",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Entangled" => Ok(Label::Entangled),
            "NonclassicalSeparable" => Ok(Label::NonclassicalSeparable),
            "Classical" => Ok(Label::Classical),
            other => Err(QcorrError::Config(format!("unknown label `{other}`"))),
        }
    }
}

/// Classification thresholds, the measured side for discord, and the discord
/// mode used for the classical correlation column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    pub measured: Subsystem,
    pub eps_c: f64,
    pub eps_d: f64,
    pub mode: DiscordMode,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            measured: Subsystem::Second,
            eps_c: DEFAULT_EPS_C,
            eps_d: DEFAULT_EPS_D,
            mode: DiscordMode::Optimized,
        }
    }
}

/// Every measure of one state, plus its label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub concurrence: f64,
    pub eof: f64,
    pub bell_m: f64,
    pub n: f64,
    pub f_max: f64,
    pub discord_fixed: f64,
    pub discord_opt: f64,
    pub classical_corr: f64,
    pub mutual_info: f64,
    pub label: Label,
}

impl CorrelationReport {
    /// Computes all measures. `classical_corr` is `I − D` for `opts.mode`; the
    /// label always uses the optimised discord.
    pub fn compute(rho: &DensityMatrix, opts: &MeasureOptions) -> Self {
        let f = fano_decompose(rho).expect("two-qubit state");
        let c = concurrence(rho);
        let tf = teleport_fidelity_from_fano(&f);
        let ds = discord_summary(rho, opts.measured);
        let mut report = Self {
            concurrence: c,
            eof: eof(c).expect("clamped concurrence"),
            bell_m: bell_m_from_fano(&f),
            n: tf.n,
            f_max: tf.f_max,
            discord_fixed: ds.discord_fixed,
            discord_opt: ds.discord_opt,
            classical_corr: ds.classical_correlation(opts.mode),
            mutual_info: ds.mutual_info,
            label: Label::Classical,
        };
        report.label = classify(&report, opts.eps_c, opts.eps_d);
        report
    }

    pub fn discord(&self, mode: DiscordMode) -> f64 {
        match mode {
            DiscordMode::FixedBasis => self.discord_fixed,
            DiscordMode::Optimized => self.discord_opt,
        }
    }

    /// Entangled, Bell-CHSH satisfying, yet better than classical teleportation.
    pub fn teleport_without_violation(&self) -> bool {
        self.bell_m <= 1.0 && self.f_max > CLASSICAL_FIDELITY + 1e-9
    }
}

/// Entangled iff `C > ε_C`; otherwise nonclassical iff optimised discord `> ε_D`.
pub fn classify(report: &CorrelationReport, eps_c: f64, eps_d: f64) -> Label {
    if report.concurrence > eps_c {
        Label::Entangled
    } else if report.discord_opt > eps_d {
        Label::NonclassicalSeparable
    } else {
        Label::Classical
    }
}
