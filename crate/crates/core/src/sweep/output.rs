use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::Output;
use super::{ClassificationTable, SweepConfig, SweepOutcome, SweepResults};
use crate::error::{QcorrError, Result};
use crate::measures::{CorrelationReport, CLASSICAL_FIDELITY};

/// Measure columns after the parameter column, in CSV order.
pub const CSV_COLUMNS: [&str; 10] = [
    "conc",
    "eof",
    "bell_M",
    "N",
    "f_max",
    "discord_fixed",
    "discord_opt",
    "classical_corr",
    "mutual_info",
    "label",
];

fn column(r: &CorrelationReport, name: &str) -> Option<f64> {
    Some(match name {
        "conc" => r.concurrence,
        "eof" => r.eof,
        "bell_M" => r.bell_m,
        "N" => r.n,
        "f_max" => r.f_max,
        "discord_fixed" => r.discord_fixed,
        "discord_opt" => r.discord_opt,
        "classical_corr" => r.classical_corr,
        "mutual_info" => r.mutual_info,
        _ => return None,
    })
}

/// `x` with 12 significant digits in the style of C's `%.12g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..DIGITS).contains(&exp) {
        trim(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x))
    } else {
        format!(
            "{}e{}{:02}",
            trim(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

impl SweepResults {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{},{}\n", self.param, CSV_COLUMNS.join(","));
        for row in &self.rows {
            s.push_str(&format_sig(row.x));
            for name in &CSV_COLUMNS[..9] {
                s.push(',');
                s.push_str(&format_sig(
                    column(&row.report, name).expect("known column"),
                ));
            }
            let _ = writeln!(s, ",{}", row.report.label);
        }
        s
    }
}

impl ClassificationTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,interval_lo,interval_hi,label\n");
        for i in &self.intervals {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                self.param,
                format_sig(i.lo),
                format_sig(i.hi),
                i.label
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<[String; 3]> = self
            .intervals
            .iter()
            .map(|i| [format_sig(i.lo), format_sig(i.hi), i.label.to_string()])
            .collect();
        let header = [
            format!("{} from", self.param),
            format!("{} to", self.param),
            "label".to_string(),
        ];
        aligned(&header, &cells)
    }
}

fn aligned<const N: usize>(header: &[String; N], cells: &[[String; N]]) -> String {
    let mut width: [usize; N] = std::array::from_fn(|k| header[k].len());
    for row in cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: &[String; N]| -> String {
        let mut s = String::new();
        for (k, (c, w)) in row.iter().zip(width).enumerate() {
            if k > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{c:<w$}");
        }
        s.trim_end().to_string() + "\n"
    };
    let mut s = line(header);
    s.push_str(&line(&width.map(|w| "-".repeat(w))));
    for row in cells {
        s.push_str(&line(row));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportationRow {
    pub x: f64,
    pub bell_m: f64,
    pub f_max: f64,
    /// `M > 1`.
    pub violates_bell: bool,
    /// `f_max > 2/3`.
    pub useful: bool,
    /// Bell-satisfying yet teleportation-useful: `M ≤ 1 ∧ f_max > 2/3 + 1e−9`.
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportationTable {
    pub param: String,
    pub rows: Vec<TeleportationRow>,
}

pub fn emit_teleportation_table(results: &SweepResults) -> TeleportationTable {
    let rows = results
        .rows
        .iter()
        .map(|r| {
            let (m, f) = (r.report.bell_m, r.report.f_max);
            TeleportationRow {
                x: r.x,
                bell_m: m,
                f_max: f,
                violates_bell: m > 1.0,
                useful: f > CLASSICAL_FIDELITY + 1e-9,
                flag: m <= 1.0 && f > CLASSICAL_FIDELITY + 1e-9,
            }
        })
        .collect();
    TeleportationTable {
        param: results.param.to_string(),
        rows,
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

impl TeleportationTable {
    pub fn flagged(&self) -> impl Iterator<Item = &TeleportationRow> {
        self.rows.iter().filter(|r| r.flag)
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "{},bell_M,f_max,bell_violation,teleport_useful,flag\n",
            self.param
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                format_sig(r.x),
                format_sig(r.bell_m),
                format_sig(r.f_max),
                yes_no(r.violates_bell),
                yes_no(r.useful),
                yes_no(r.flag)
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let header = [
            self.param.clone(),
            "M".into(),
            "f_max".into(),
            "M > 1".into(),
            "f_max > 2/3".into(),
            "flag".into(),
        ];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    format_sig(r.x),
                    format!("{:.6}", r.bell_m),
                    format!("{:.6}", r.f_max),
                    yes_no(r.violates_bell),
                    yes_no(r.useful),
                    if r.flag { "*".into() } else { String::new() },
                ]
            })
            .collect();
        aligned(&header, &cells)
    }
}

/// Writes `<column>.dat` files of `x y` pairs and returns their paths.
pub fn emit_plot_data(
    results: &SweepResults,
    columns: &[String],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    for c in columns {
        if !CSV_COLUMNS[..9].contains(&c.as_str()) {
            return Err(QcorrError::UnknownColumn(c.clone()));
        }
    }
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for c in columns {
        let mut s = String::new();
        for row in &results.rows {
            let y = column(&row.report, c).expect("checked column");
            let _ = writeln!(s, "{} {}", format_sig(row.x), format_sig(y));
        }
        let path = dir.join(format!("{c}.dat"));
        fs::write(&path, s)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Writes every output requested by `cfg` into `dir`. The data CSV is named `csv_name`.
pub fn write_outputs(
    cfg: &SweepConfig,
    outcome: &SweepOutcome,
    dir: &Path,
    csv_name: &str,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    for out in &cfg.outputs {
        match out {
            Output::Csv => put(csv_name, outcome.results.to_csv())?,
            Output::Table => {
                put("classification.txt", outcome.table.to_text())?;
                put("classification.csv", outcome.table.to_csv())?;
            }
            Output::Teleportation => {
                let t = emit_teleportation_table(&outcome.results);
                put("teleportation.txt", t.to_text())?;
                put("teleportation.csv", t.to_csv())?;
            }
            Output::Plot => {}
        }
    }
    if cfg.outputs.contains(&Output::Plot) {
        written.extend(emit_plot_data(&outcome.results, &cfg.plot_columns, dir)?);
    }
    Ok(written)
}
