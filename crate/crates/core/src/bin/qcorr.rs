use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcorr::linalg::Subsystem;
use qcorr::measures::{DiscordMode, MeasureOptions};
use qcorr::state::read_state_file;
use qcorr::sweep::{
    apply_overrides, emit_teleportation_table, format_sig, parse_pairs, run_measure, run_sweep,
    write_outputs, Model, SweepConfig, CSV_COLUMNS,
};
use qcorr::{QcorrError, Result};

/// Two-qubit correlation measures, open-system evolution and parameter sweeps.
#[derive(Parser)]
#[command(name = "qcorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure every correlation quantity of a state file.
    Measure {
        state: PathBuf,
        /// Qubit measured for discord (1 or 2).
        #[arg(long, default_value_t = 2)]
        measured: usize,
        #[arg(long, default_value = "optimized")]
        discord_mode: DiscordMode,
    },
    /// Dissipative trajectory sampled on a uniform time grid.
    Evolve {
        #[command(flatten)]
        common: ConfigArgs,
        /// Final time; sets `sweep.to`.
        #[arg(long)]
        t_end: Option<f64>,
        /// Number of samples including t = 0; sets `sweep.steps`.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run a configured parameter sweep.
    Sweep {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Run a configured sweep with the QND channel.
    QndSweep {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Print the classification and teleportation tables of a sweep.
    Table {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override a config entry; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn load(path: &Path, preset: &[String], overrides: &[String]) -> Result<SweepConfig> {
    let mut map = parse_pairs(&std::fs::read_to_string(path)?)?;
    apply_overrides(&mut map, preset)?;
    apply_overrides(&mut map, overrides)?;
    SweepConfig::from_pairs(&map)
}

fn sweep_to(cfg: &SweepConfig, out: &Path, csv_name: &str) -> Result<()> {
    let outcome = run_sweep(cfg)?;
    for p in write_outputs(cfg, &outcome, out, csv_name)? {
        println!("wrote {}", p.display());
    }
    print!("{}", outcome.table.to_text());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Measure {
            state,
            measured,
            discord_mode,
        } => {
            let measured = Subsystem::from_index(measured).ok_or_else(|| {
                QcorrError::Config(format!("--measured must be 1 or 2, got {measured}"))
            })?;
            let rho = read_state_file(&state)?;
            let opts = MeasureOptions {
                measured,
                mode: discord_mode,
                ..MeasureOptions::default()
            };
            let r = run_measure(&rho, &opts);
            let values = [
                r.concurrence,
                r.eof,
                r.bell_m,
                r.n,
                r.f_max,
                r.discord_fixed,
                r.discord_opt,
                r.classical_corr,
                r.mutual_info,
            ];
            for (name, v) in CSV_COLUMNS.iter().zip(values) {
                println!("{name:<15}{}", format_sig(v));
            }
            println!("{:<15}{}", "label", r.label);
            println!();
            println!("{}", CSV_COLUMNS.join(","));
            let row: Vec<String> = values.iter().map(|&v| format_sig(v)).collect();
            println!("{},{}", row.join(","), r.label);
            Ok(())
        }
        Command::Evolve {
            common,
            t_end,
            samples,
        } => {
            let mut preset = vec!["sweep.param=t".to_string(), "sweep.from=0".to_string()];
            if let Some(t) = t_end {
                preset.push(format!("sweep.to={t}"));
            }
            if let Some(n) = samples {
                preset.push(format!("sweep.steps={n}"));
            }
            let cfg = load(&common.config, &preset, &common.overrides)?;
            if cfg.model != Model::Dissipative {
                return Err(QcorrError::Config(
                    "`evolve` needs model = dissipative".into(),
                ));
            }
            sweep_to(&cfg, &common.out, "trajectory.csv")
        }
        Command::Sweep { common } => {
            let cfg = load(&common.config, &[], &common.overrides)?;
            sweep_to(&cfg, &common.out, "sweep.csv")
        }
        Command::QndSweep { common } => {
            let cfg = load(
                &common.config,
                &["model=qnd".to_string()],
                &common.overrides,
            )?;
            sweep_to(&cfg, &common.out, "sweep.csv")
        }
        Command::Table { config, overrides } => {
            let cfg = load(&config, &[], &overrides)?;
            let outcome = run_sweep(&cfg)?;
            print!("{}", outcome.table.to_text());
            println!();
            print!("{}", emit_teleportation_table(&outcome.results).to_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_integrator_failure() {
                ExitCode::from(3)
            } else if matches!(e, QcorrError::Io(_)) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
