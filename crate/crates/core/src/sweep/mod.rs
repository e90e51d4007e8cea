//! Configuration-driven parameter sweeps and their tabular outputs.
//!
//! A sweep evaluates every grid point on a worker pool sized by
//! `QCORR_THREADS`, keeps the results in grid order, and derives a
//! classification table whose interval endpoints are refined by bisection.

mod config;
mod output;

use rayon::prelude::*;

pub use config::{
    apply_overrides, parse_pairs, InitialState, Model, Output, PointSetup, SweepConfig, SweepParam,
    SweepRange,
};
pub use output::{
    emit_plot_data, emit_teleportation_table, format_sig, write_outputs, TeleportationRow,
    TeleportationTable, CSV_COLUMNS,
};

use crate::dissipative::{evolve_sampled, suggest_dt};
use crate::error::{QcorrError, Result};
use crate::measures::{CorrelationReport, Label, MeasureOptions};
use crate::state::DensityMatrix;

/// Width below which a classification boundary is considered located.
pub const BISECTION_TOL: f64 = 1e-4;

/// Number of workers: `QCORR_THREADS` if set to a positive integer, else
/// the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("QCORR_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub report: CorrelationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResults {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub label: Label,
}

/// Parameter intervals of constant label, covering the sweep range.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationTable {
    pub param: SweepParam,
    pub intervals: Vec<Interval>,
}

impl ClassificationTable {
    /// Label of the interval containing `x`; shared endpoints resolve to the left interval.
    pub fn label_at(&self, x: f64) -> Option<Label> {
        self.intervals
            .iter()
            .find(|i| i.lo <= x && x <= i.hi)
            .map(|i| i.label)
    }

    pub fn intervals_with(&self, label: Label) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.label == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub results: SweepResults,
    pub table: ClassificationTable,
}

/// Evaluates states on demand for one configuration.
struct Evaluator<'a> {
    cfg: &'a SweepConfig,
    rho0: DensityMatrix,
    opts: MeasureOptions,
    /// Step used by the time-sweep trajectory, reused for bisection points.
    dt: Option<f64>,
}

impl Evaluator<'_> {
    fn at_point<T>(&self, x: f64, r: Result<T>) -> Result<T> {
        r.map_err(|e| QcorrError::AtGridPoint {
            param: self.cfg.sweep.param.to_string(),
            value: x,
            source: Box::new(e),
        })
    }

    fn report(&self, x: f64) -> Result<CorrelationReport> {
        let r = self
            .cfg
            .point(x)
            .and_then(|p| p.state(&self.rho0, self.dt))
            .map(|rho| CorrelationReport::compute(&rho, &self.opts));
        self.at_point(x, r)
    }

    fn label(&self, x: f64) -> Result<Label> {
        Ok(self.report(x)?.label)
    }

    /// Boundaries between `lo` (label `la`) and `hi` (label `lb`), each as
    /// `(position, label to the right)`.
    fn boundaries(&self, mut lo: f64, la: Label, hi: f64, lb: Label) -> Result<Vec<(f64, Label)>> {
        let end = hi;
        let (mut hi, mut lh) = (hi, lb);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            let lm = self.label(mid)?;
            if lm == la {
                lo = mid;
            } else {
                hi = mid;
                lh = lm;
            }
        }
        let mut out = vec![(0.5 * (lo + hi), lh)];
        if lh != lb {
            out.extend(self.boundaries(hi, lh, end, lb)?);
        }
        Ok(out)
    }
}

fn classification_table(eval: &Evaluator<'_>, rows: &[SweepRow]) -> Result<ClassificationTable> {
    let transitions: Vec<usize> = (1..rows.len())
        .filter(|&i| rows[i].report.label != rows[i - 1].report.label)
        .collect();
    let located: Vec<Vec<(f64, Label)>> = transitions
        .par_iter()
        .map(|&i| {
            let (a, b) = (&rows[i - 1], &rows[i]);
            eval.boundaries(a.x, a.report.label, b.x, b.report.label)
        })
        .collect::<Result<_>>()?;

    let mut intervals = Vec::new();
    let (mut lo, mut label) = (rows[0].x, rows[0].report.label);
    for (x, next) in located.into_iter().flatten() {
        intervals.push(Interval { lo, hi: x, label });
        lo = x;
        label = next;
    }
    intervals.push(Interval {
        lo,
        hi: rows.last().expect("at least two rows").x,
        label,
    });
    Ok(ClassificationTable {
        param: eval.cfg.sweep.param,
        intervals,
    })
}

/// Runs a configured sweep on the worker pool.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| QcorrError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_sweep_inner(cfg))
}

fn run_sweep_inner(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let grid = cfg.sweep.grid();
    let mut eval = Evaluator {
        cfg,
        rho0: cfg.initial()?,
        opts: cfg.measure_options(),
        dt: cfg.dt,
    };

    let trajectory = cfg.model == Model::Dissipative && cfg.sweep.param == SweepParam::Time;
    let rows: Vec<SweepRow> = if trajectory {
        // One trajectory sampled at every grid time.
        let last = *grid.last().expect("grid");
        let PointSetup::Dissipative { params, .. } = eval.at_point(last, cfg.point(last))? else {
            unreachable!("dissipative model");
        };
        let dt = match cfg.dt {
            Some(dt) => dt,
            None => eval.at_point(last, suggest_dt(&params, last))?,
        };
        eval.dt = Some(dt);
        let traj = eval.at_point(last, evolve_sampled(&eval.rho0, &params, &grid, dt))?;
        traj.states
            .par_iter()
            .zip(&grid)
            .map(|(rho, &x)| SweepRow {
                x,
                report: CorrelationReport::compute(rho, &eval.opts),
            })
            .collect()
    } else {
        grid.par_iter()
            .map(|&x| eval.report(x).map(|report| SweepRow { x, report }))
            .collect::<Result<_>>()?
    };

    let table = classification_table(&eval, &rows)?;
    Ok(SweepOutcome {
        results: SweepResults {
            param: cfg.sweep.param,
            rows,
        },
        table,
    })
}

/// Measures a single state.
pub fn run_measure(rho: &DensityMatrix, opts: &MeasureOptions) -> CorrelationReport {
    CorrelationReport::compute(rho, opts)
}
