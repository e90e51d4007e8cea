use std::path::Path;
use std::process::{Command, Output};

use qcorr::state::{bell, maximally_mixed, write_state};

fn qcorr(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr"))
        .args(args)
        .current_dir(dir)
        .env("QCORR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value of `column` in the CSV row printed by `measure`.
fn csv_value(out: &str, column: &str) -> String {
    let lines: Vec<&str> = out.lines().collect();
    let header = lines[lines.len() - 2].split(',').collect::<Vec<_>>();
    let row = lines[lines.len() - 1].split(',').collect::<Vec<_>>();
    let k = header.iter().position(|h| *h == column).unwrap();
    row[k].to_string()
}

#[test]
fn measure_maximally_mixed_is_classical_and_zero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("mixed.txt"),
        write_state(maximally_mixed().matrix()),
    )
    .unwrap();
    let o = qcorr(&["measure", "mixed.txt"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    for col in ["conc", "eof", "bell_M", "N", "discord_opt", "mutual_info"] {
        assert_eq!(
            csv_value(&out, col).parse::<f64>().unwrap().abs(),
            0.0,
            "{col}"
        );
    }
    assert_eq!(csv_value(&out, "f_max"), "0.5");
    assert_eq!(csv_value(&out, "label"), "Classical");
}

#[test]
fn measure_bell_state() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bell.txt"),
        write_state(bell(1).unwrap().matrix()),
    )
    .unwrap();
    let o = qcorr(&["measure", "bell.txt", "--measured", "1"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let v = |c| csv_value(&out, c).parse::<f64>().unwrap();
    assert!((v("conc") - 1.0).abs() < 1e-9);
    assert!((v("bell_M") - 2.0).abs() < 1e-9);
    assert!((v("f_max") - 1.0).abs() < 1e-9);
    assert_eq!(csv_value(&out, "label"), "Entangled");
}

#[test]
fn invalid_state_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    // Trace 0.9.
    let m = qcorr::ComplexMatrix::from_real_diagonal(&[0.3, 0.2, 0.2, 0.2]);
    std::fs::write(dir.path().join("bad.txt"), write_state(&m)).unwrap();
    let o = qcorr(&["measure", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Tr"));

    std::fs::write(dir.path().join("garbled.txt"), "4\n0.25 0\nfoo\n").unwrap();
    let o = qcorr(&["measure", "garbled.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = qcorr(&["measure", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn coarse_explicit_step_exits_with_integrator_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "model = dissipative\ninitial_state = eg\nfixed.r12 = 0.1\ndt = 0.5\n\
         sweep.param = t\nsweep.from = 0\nsweep.to = 1\nsweep.steps = 5\n",
    )
    .unwrap();
    let o = qcorr(
        &["sweep", "--config", "run.cfg", "--out", "out"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("w.cfg"),
        "model = werner\nsweep.param = p\nsweep.from = 0\nsweep.to = 1\nsweep.steps = 11\n\
         outputs = csv, table, teleportation\n",
    )
    .unwrap();
    let o = qcorr(&["sweep", "--config", "w.cfg", "--out", "out"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines[0].starts_with("p,conc,eof,bell_M,N,f_max"));
    assert!(dir.path().join("out/classification.csv").exists());
    let tele = std::fs::read_to_string(dir.path().join("out/teleportation.csv")).unwrap();
    // p = 0.4, 0.5, 0.6, 0.7 are Bell-satisfying and teleportation-useful.
    assert_eq!(tele.lines().filter(|l| l.ends_with(",yes")).count(), 4);
}

#[test]
fn overrides_and_table_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("w.cfg"),
        "model = werner\nsweep.param = p\nsweep.from = 0\nsweep.to = 0.2\nsweep.steps = 3\n",
    )
    .unwrap();
    let o = qcorr(
        &["table", "--config", "w.cfg", "--set", "sweep.to=1"],
        dir.path(),
    );
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Entangled"));
    assert!(out.contains("NonclassicalSeparable"));
    assert!(out.contains("0.3333"));

    let o = qcorr(
        &["table", "--config", "w.cfg", "--set", "sweep.steps=1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evolve_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("e.cfg"),
        "model = dissipative\ninitial_state = bell1\nfixed.T = 0.5\nfixed.r12 = 0.8\n",
    )
    .unwrap();
    let o = qcorr(
        &[
            "evolve",
            "--config",
            "e.cfg",
            "--out",
            "out",
            "--t-end",
            "2",
            "--samples",
            "21",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 22);
    assert!(lines[0].starts_with("t,conc,"));
    assert!(lines[1].starts_with("0,1,"));
}

#[test]
fn qnd_sweep_runs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("q.cfg"),
        "initial_state = bell3\nfixed.regime = collective\nsweep.param = t\nsweep.from = 0\nsweep.to = 2\nsweep.steps = 5\n",
    )
    .unwrap();
    let o = qcorr(
        &["qnd-sweep", "--config", "q.cfg", "--out", "out"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    // |ψ⁺⟩ lies in the decoherence-free subspace of the collective channel.
    assert!(csv
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(1) == Some("1")));
}
