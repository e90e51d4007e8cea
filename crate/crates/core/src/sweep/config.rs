use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dissipative::{BathSpec, Coupling, DissipativeParams};
use crate::error::{QcorrError, Result};
use crate::linalg::Subsystem;
use crate::measures::{DiscordMode, MeasureOptions, DEFAULT_EPS_C, DEFAULT_EPS_D};
use crate::qnd::{default_kernel, QndKernel, Regime};
use crate::state::{
    bell, maximally_mixed, product, random_state, read_state_file, werner, DensityMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Dissipative,
    Qnd,
    /// `p|ψ⁻⟩⟨ψ⁻| + (1−p)I/4`, no dynamics.
    Werner,
}

impl FromStr for Model {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dissipative" => Ok(Model::Dissipative),
            "qnd" => Ok(Model::Qnd),
            "werner" => Ok(Model::Werner),
            other => Err(QcorrError::Config(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Squeezing `r`.
    R,
    /// Separation `r₁₂`; `k₀r₁₂ = fixed.k0 · r12`.
    R12,
    /// Temperature.
    T,
    /// Evolution time.
    Time,
    /// Werner mixing weight.
    P,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::R => "r",
            SweepParam::R12 => "r12",
            SweepParam::T => "T",
            SweepParam::Time => "t",
            SweepParam::P => "p",
        }
    }

    fn allowed_for(&self, model: Model) -> bool {
        match model {
            Model::Werner => *self == SweepParam::P,
            Model::Dissipative | Model::Qnd => *self != SweepParam::P,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(SweepParam::R),
            "r12" => Ok(SweepParam::R12),
            "T" => Ok(SweepParam::T),
            "t" => Ok(SweepParam::Time),
            "p" => Ok(SweepParam::P),
            other => Err(QcorrError::Config(format!(
                "unknown sweep parameter `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepRange {
    /// `steps` equally spaced points including both ends.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Product of two Bloch vectors.
    Product([f64; 3], [f64; 3]),
    /// `bell1` … `bell4`.
    Bell(usize),
    MaximallyMixed,
    /// Ginibre-random state drawn from `seed`.
    Random,
    File(PathBuf),
}

impl InitialState {
    pub fn build(&self, seed: u64) -> Result<DensityMatrix> {
        match self {
            InitialState::Product(a, b) => product(*a, *b),
            InitialState::Bell(k) => bell(*k),
            InitialState::MaximallyMixed => Ok(maximally_mixed()),
            InitialState::Random => Ok(random_state(&mut ChaCha8Rng::seed_from_u64(seed))),
            InitialState::File(p) => read_state_file(p),
        }
    }
}

fn parse_bloch(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(QcorrError::Config(format!(
            "Bloch vector needs three components: `{s}`"
        )));
    }
    let mut v = [0.0; 3];
    for (x, p) in v.iter_mut().zip(parts) {
        *x = p
            .parse()
            .map_err(|_| QcorrError::Config(format!("bad Bloch component `{p}`")))?;
    }
    Ok(v)
}

impl FromStr for InitialState {
    type Err = QcorrError;

    /// Names `ee`, `eg`, `ge`, `gg`, `++`, `bell1`…`bell4`, `mixed`, `random`,
    /// `file:<path>`, or two Bloch vectors `x,y,z; x,y,z`.
    fn from_str(s: &str) -> Result<Self> {
        const E: [f64; 3] = [0.0, 0.0, 1.0];
        const G: [f64; 3] = [0.0, 0.0, -1.0];
        const PLUS: [f64; 3] = [1.0, 0.0, 0.0];
        let s = s.trim();
        Ok(match s {
            "ee" => InitialState::Product(E, E),
            "eg" => InitialState::Product(E, G),
            "ge" => InitialState::Product(G, E),
            "gg" => InitialState::Product(G, G),
            "++" => InitialState::Product(PLUS, PLUS),
            "mixed" => InitialState::MaximallyMixed,
            "random" => InitialState::Random,
            _ => {
                if let Some(k) = s.strip_prefix("bell") {
                    match k.parse::<usize>() {
                        Ok(k @ 1..=4) => InitialState::Bell(k),
                        _ => return Err(QcorrError::Config(format!("unknown Bell state `{s}`"))),
                    }
                } else if let Some(path) = s.strip_prefix("file:") {
                    InitialState::File(PathBuf::from(path.trim()))
                } else if let Some((a, b)) = s.split_once(';') {
                    InitialState::Product(parse_bloch(a)?, parse_bloch(b)?)
                } else {
                    return Err(QcorrError::Config(format!("unknown initial state `{s}`")));
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Csv,
    Table,
    Teleportation,
    Plot,
}

impl FromStr for Output {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Output::Csv),
            "table" => Ok(Output::Table),
            "teleportation" => Ok(Output::Teleportation),
            "plot" => Ok(Output::Plot),
            other => Err(QcorrError::Config(format!("unknown output `{other}`"))),
        }
    }
}

const DISSIPATIVE_KEYS: &[&str] = &[
    "T", "r", "phi", "r12", "k0", "a", "gamma", "omega0", "detuning", "t", "gamma12", "omega12",
];
const QND_KEYS: &[&str] = &["T", "r", "phi", "r12", "k0", "gamma0", "omega0", "t"];
const WERNER_KEYS: &[&str] = &["p"];

/// A parsed and validated sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: Model,
    pub initial_state: InitialState,
    /// Numeric `fixed.*` values.
    pub fixed: BTreeMap<String, f64>,
    /// `fixed.regime` for the QND model; derived from `r12` when absent.
    pub regime: Option<Regime>,
    /// `fixed.coupling = independent` drops the collective rates.
    pub independent_coupling: bool,
    pub sweep: SweepRange,
    pub discord_mode: DiscordMode,
    pub measured: Subsystem,
    pub eps_c: f64,
    pub eps_d: f64,
    pub outputs: Vec<Output>,
    pub plot_columns: Vec<String>,
    pub seed: u64,
    /// Integrator step; chosen automatically when absent.
    pub dt: Option<f64>,
}

/// Parses `key = value` lines. `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| QcorrError::Parse {
            line: n + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Applies `key=value` overrides.
pub fn apply_overrides(map: &mut BTreeMap<String, String>, overrides: &[String]) -> Result<()> {
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| QcorrError::Config(format!("override must be key=value: `{o}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(())
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| QcorrError::Config(format!("`{key}` expects a number, got `{v}`")))
}

impl SweepConfig {
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut map = parse_pairs(text)?;
        apply_overrides(&mut map, overrides)?;
        Self::from_pairs(&map)
    }

    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let required = |k: &str| get(k).ok_or_else(|| QcorrError::Config(format!("missing `{k}`")));

        let model: Model = required("model")?.parse()?;
        let allowed = match model {
            Model::Dissipative => DISSIPATIVE_KEYS,
            Model::Qnd => QND_KEYS,
            Model::Werner => WERNER_KEYS,
        };

        let mut fixed = BTreeMap::new();
        let mut regime = None;
        let mut independent_coupling = false;
        for (k, v) in map {
            let Some(name) = k.strip_prefix("fixed.") else {
                continue;
            };
            match (name, model) {
                ("regime", Model::Qnd) => regime = Some(v.parse()?),
                ("coupling", Model::Dissipative) => {
                    independent_coupling = match v.as_str() {
                        "independent" => true,
                        "geometric" => false,
                        other => {
                            return Err(QcorrError::Config(format!("unknown coupling `{other}`")))
                        }
                    }
                }
                _ if allowed.contains(&name) => {
                    fixed.insert(name.to_string(), number(k, v)?);
                }
                _ => {
                    return Err(QcorrError::Config(format!(
                        "`{k}` is not a parameter of the {model:?} model"
                    )))
                }
            }
        }

        let sweep = SweepRange {
            param: required("sweep.param")?.parse()?,
            from: number("sweep.from", required("sweep.from")?)?,
            to: number("sweep.to", required("sweep.to")?)?,
            steps: required("sweep.steps")?
                .parse()
                .map_err(|_| QcorrError::Config("`sweep.steps` expects an integer".into()))?,
        };
        if !sweep.param.allowed_for(model) {
            return Err(QcorrError::Config(format!(
                "sweep parameter `{}` is not known to the {model:?} model",
                sweep.param
            )));
        }
        if sweep.steps < 2 {
            return Err(QcorrError::Config(format!(
                "sweep.steps must be at least 2, got {}",
                sweep.steps
            )));
        }
        if !(sweep.from < sweep.to) {
            return Err(QcorrError::Config(format!(
                "sweep.from ({}) must be below sweep.to ({})",
                sweep.from, sweep.to
            )));
        }

        let initial_state = match (model, get("initial_state")) {
            (Model::Werner, None) => InitialState::MaximallyMixed,
            (_, Some(s)) => s.parse()?,
            (_, None) => return Err(QcorrError::Config("missing `initial_state`".into())),
        };

        let measured = match get("measured").unwrap_or("2") {
            "1" => Subsystem::First,
            "2" => Subsystem::Second,
            other => {
                return Err(QcorrError::Config(format!(
                    "`measured` must be 1 or 2, got `{other}`"
                )))
            }
        };
        let outputs = match get("outputs") {
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?,
            None => vec![Output::Csv, Output::Table],
        };
        let plot_columns = get("plot.columns")
            .map(|s| {
                s.split(',')
                    .map(|c| c.trim().to_string())
                    .filter(|c| !c.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        let dt = get("dt").map(|v| number("dt", v)).transpose()?;
        if let Some(dt) = dt {
            if !(dt > 0.0) {
                return Err(QcorrError::Config(format!("dt must be positive, got {dt}")));
            }
        }

        let cfg = Self {
            model,
            initial_state,
            fixed,
            regime,
            independent_coupling,
            sweep,
            discord_mode: get("discord_mode").unwrap_or("optimized").parse()?,
            measured,
            eps_c: get("eps_c")
                .map(|v| number("eps_c", v))
                .transpose()?
                .unwrap_or(DEFAULT_EPS_C),
            eps_d: get("eps_d")
                .map(|v| number("eps_d", v))
                .transpose()?
                .unwrap_or(DEFAULT_EPS_D),
            outputs,
            plot_columns,
            seed: get("seed")
                .map(|v| {
                    v.parse()
                        .map_err(|_| QcorrError::Config(format!("bad seed `{v}`")))
                })
                .transpose()?
                .unwrap_or(0),
            dt,
        };
        if cfg.model != Model::Werner {
            // Surface parameter errors before any work is scheduled.
            cfg.point(cfg.sweep.from)?;
            cfg.point(cfg.sweep.to)?;
        }
        Ok(cfg)
    }

    pub fn measure_options(&self) -> MeasureOptions {
        MeasureOptions {
            measured: self.measured,
            eps_c: self.eps_c,
            eps_d: self.eps_d,
            mode: self.discord_mode,
        }
    }

    /// Fixed value of `key` with the sweep value substituted when it is the swept one.
    fn value(&self, key: &str, default: f64, at: Option<(SweepParam, f64)>) -> f64 {
        if let Some((p, v)) = at {
            if p.name() == key {
                return v;
            }
        }
        self.fixed.get(key).copied().unwrap_or(default)
    }

    fn bath(&self, at: Option<(SweepParam, f64)>) -> BathSpec {
        BathSpec {
            temperature: self.value("T", 0.0, at),
            squeezing: self.value("r", 0.0, at),
            squeezing_phase: self.value("phi", 0.0, at),
            omega0: self.value("omega0", 1.0, at),
        }
    }

    /// Model parameters and evolution time at one sweep value.
    pub fn point(&self, value: f64) -> Result<PointSetup> {
        let at = Some((self.sweep.param, value));
        let t = self.value("t", 0.0, at);
        if !(t >= 0.0) {
            return Err(QcorrError::OutOfRange {
                what: "t",
                value: t,
            });
        }
        match self.model {
            Model::Werner => Ok(PointSetup::Werner(self.value("p", 0.0, at))),
            Model::Dissipative => {
                let gamma = self.value("gamma", 1.0, at);
                let coupling = if self.independent_coupling {
                    Coupling::INDEPENDENT
                } else if self.fixed.contains_key("gamma12") || self.fixed.contains_key("omega12") {
                    Coupling::Explicit {
                        gamma12: self.value("gamma12", 0.0, at),
                        omega12: self.value("omega12", 0.0, at),
                    }
                } else {
                    Coupling::Geometric {
                        x: self.value("k0", 1.0, at) * self.value("r12", 1.0, at),
                        alignment: self.value("a", 0.0, at),
                    }
                };
                let params = DissipativeParams {
                    gamma,
                    detuning: self.value("detuning", 0.0, at),
                    coupling,
                    bath: self.bath(at),
                };
                params.coefficients()?;
                Ok(PointSetup::Dissipative { params, t })
            }
            Model::Qnd => {
                let regime = match self.regime {
                    Some(r) => r,
                    None => {
                        let k0 = self.value("k0", 1.0, at);
                        Regime::from_separation(
                            self.value("r12", 1.0, at),
                            2.0 * std::f64::consts::PI / k0,
                        )
                    }
                };
                let kernel = default_kernel(&self.bath(at), self.value("gamma0", 1.0, at), regime)?;
                Ok(PointSetup::Qnd { kernel, t })
            }
        }
    }

    pub fn initial(&self) -> Result<DensityMatrix> {
        self.initial_state.build(self.seed)
    }
}

/// Everything needed to produce the state at one grid value.
#[derive(Debug, Clone)]
pub enum PointSetup {
    Werner(f64),
    Dissipative { params: DissipativeParams, t: f64 },
    Qnd { kernel: QndKernel, t: f64 },
}

impl PointSetup {
    pub fn state(&self, rho0: &DensityMatrix, dt: Option<f64>) -> Result<DensityMatrix> {
        match self {
            PointSetup::Werner(p) => werner(*p),
            PointSetup::Dissipative { params, t } => {
                if *t == 0.0 {
                    return Ok(rho0.clone());
                }
                let dt = match dt {
                    Some(dt) => dt,
                    None => crate::dissipative::suggest_dt(params, *t)?,
                };
                let traj = crate::dissipative::evolve(rho0, params, *t, dt)?;
                Ok(traj.states.into_iter().last().expect("two samples"))
            }
            PointSetup::Qnd { kernel, t } => crate::qnd::apply_qnd_channel(rho0, kernel, *t),
        }
    }
}
