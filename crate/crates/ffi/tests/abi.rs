use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qcorr_ffi::*;

fn new_state(f: impl FnOnce(*mut *mut QcorrState) -> QcorrStatus) -> *mut QcorrState {
    let mut s = ptr::null_mut();
    assert_eq!(f(&mut s), QcorrStatus::Ok);
    assert!(!s.is_null());
    s
}

fn measure(s: *const QcorrState) -> QcorrReport {
    let mut r = std::mem::MaybeUninit::<QcorrReport>::uninit();
    assert_eq!(
        unsafe { qcorr_measure(s, ptr::null(), r.as_mut_ptr()) },
        QcorrStatus::Ok
    );
    unsafe { r.assume_init() }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qcorr_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn bell_state_is_maximally_correlated() {
    let s = new_state(|out| unsafe { qcorr_state_bell(1, out) });
    let r = measure(s);
    assert!((r.concurrence - 1.0).abs() < 1e-9);
    assert!((r.bell_m - 2.0).abs() < 1e-9);
    assert!((r.f_max - 1.0).abs() < 1e-9);
    assert!((r.discord_opt - 1.0).abs() < 1e-6);
    assert_eq!(r.label, QcorrLabel::Entangled);
    unsafe { qcorr_state_free(s) };
}

#[test]
fn werner_closed_forms_through_the_abi() {
    for p in [0.0, 0.25, 0.5, 0.9] {
        let s = new_state(|out| unsafe { qcorr_state_werner(p, out) });
        let r = measure(s);
        assert!((r.concurrence - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() < 1e-9);
        assert!((r.f_max - (1.0 + p) / 2.0).abs() < 1e-9);
        unsafe { qcorr_state_free(s) };
    }
}

#[test]
fn entries_round_trip() {
    let s = new_state(|out| unsafe { qcorr_state_bell(4, out) });
    let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
    assert_eq!(
        unsafe { qcorr_state_entries(s, re.as_mut_ptr(), im.as_mut_ptr()) },
        QcorrStatus::Ok
    );
    assert!((re[5] - 0.5).abs() < 1e-15 && (re[6] + 0.5).abs() < 1e-15);
    let t = new_state(|out| unsafe { qcorr_state_from_entries(re.as_ptr(), im.as_ptr(), out) });
    assert_eq!(measure(s), measure(t));
    unsafe {
        qcorr_state_free(s);
        qcorr_state_free(t);
    }
}

#[test]
fn invalid_input_is_reported_not_panicked() {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { qcorr_state_werner(1.5, &mut s) },
        QcorrStatus::InvalidArgument
    );
    assert!(s.is_null());
    assert!(last_error().contains("Werner"));

    let mut re = [0.0; 16];
    re[0] = 0.9;
    let im = [0.0; 16];
    assert_eq!(
        unsafe { qcorr_state_from_entries(re.as_ptr(), im.as_ptr(), &mut s) },
        QcorrStatus::InvalidState
    );
    assert_eq!(
        unsafe { qcorr_state_bell(1, ptr::null_mut()) },
        QcorrStatus::NullPointer
    );
    assert_eq!(
        unsafe { qcorr_measure(ptr::null(), ptr::null(), ptr::null_mut()) },
        QcorrStatus::NullPointer
    );

    let path = CString::new("/nonexistent/state.txt").unwrap();
    assert_eq!(
        unsafe { qcorr_state_read_file(path.as_ptr(), &mut s) },
        QcorrStatus::Io
    );
}

#[test]
fn measure_options_select_the_measured_qubit() {
    let a = [0.0, 0.0, 1.0];
    let b = [0.6, 0.0, 0.0];
    let s = new_state(|out| unsafe { qcorr_state_product(a.as_ptr(), b.as_ptr(), out) });
    let mut o = std::mem::MaybeUninit::uninit();
    assert_eq!(
        unsafe { qcorr_measure_options_default(o.as_mut_ptr()) },
        QcorrStatus::Ok
    );
    let mut o = unsafe { o.assume_init() };
    assert_eq!(o.measured, 2);
    o.measured = 3;
    let mut r = std::mem::MaybeUninit::uninit();
    assert_eq!(
        unsafe { qcorr_measure(s, &o, r.as_mut_ptr()) },
        QcorrStatus::InvalidArgument
    );
    o.measured = 1;
    assert_eq!(
        unsafe { qcorr_measure(s, &o, r.as_mut_ptr()) },
        QcorrStatus::Ok
    );
    let r = unsafe { r.assume_init() };
    assert!(r.mutual_info.abs() < 1e-9);
    assert_eq!(r.label, QcorrLabel::Classical);
    unsafe { qcorr_state_free(s) };
}

#[test]
fn evolve_decays_the_excited_qubit() {
    let e = [0.0, 0.0, 1.0];
    let g = [0.0, 0.0, -1.0];
    let s = new_state(|out| unsafe { qcorr_state_product(e.as_ptr(), g.as_ptr(), out) });
    let mut p = std::mem::MaybeUninit::uninit();
    unsafe { qcorr_dissipative_params_default(p.as_mut_ptr()) };
    let mut p = unsafe { p.assume_init() };
    p.independent = true;

    let mut traj = ptr::null_mut();
    assert_eq!(
        unsafe { qcorr_evolve(s, &p, 1.0, 11, 0.0, &mut traj) },
        QcorrStatus::Ok
    );
    assert_eq!(unsafe { qcorr_trajectory_len(traj) }, 11);
    let mut t = 0.0;
    assert_eq!(
        unsafe { qcorr_trajectory_time(traj, 10, &mut t) },
        QcorrStatus::Ok
    );
    assert!((t - 1.0).abs() < 1e-12);

    let last = new_state(|out| unsafe { qcorr_trajectory_state(traj, 10, out) });
    let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
    unsafe { qcorr_state_entries(last, re.as_mut_ptr(), im.as_mut_ptr()) };
    // |eg⟩ population is e^{-Γt}.
    assert!((re[5] - (-1f64).exp()).abs() < 1e-6);

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { qcorr_trajectory_state(traj, 11, &mut bad) },
        QcorrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { qcorr_evolve(s, &p, 1.0, 1, 0.0, &mut traj) },
        QcorrStatus::InvalidArgument
    );
    unsafe {
        qcorr_trajectory_free(traj);
        qcorr_state_free(last);
        qcorr_state_free(s);
    }
}

#[test]
fn qnd_channel_keeps_populations() {
    let s = new_state(|out| unsafe { qcorr_state_bell(1, out) });
    let mut p = std::mem::MaybeUninit::uninit();
    unsafe { qcorr_qnd_params_default(p.as_mut_ptr()) };
    let p = unsafe { p.assume_init() };
    let d = new_state(|out| unsafe { qcorr_qnd_apply(s, &p, 0.5, out) });
    let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
    unsafe { qcorr_state_entries(d, re.as_mut_ptr(), im.as_mut_ptr()) };
    assert!((re[0] - 0.5).abs() < 1e-15 && (re[15] - 0.5).abs() < 1e-15);
    // Independent vacuum dephasing: coherence 1/2 · e^{-2·γ0·t}.
    assert!((re[3] - 0.5 * (-1f64).exp()).abs() < 1e-12);
    unsafe {
        qcorr_state_free(d);
        qcorr_state_free(s);
    }
}

#[test]
fn status_messages_are_static_strings() {
    for s in [
        QcorrStatus::Ok,
        QcorrStatus::IntegratorFailure,
        QcorrStatus::Panic,
    ] {
        let m = unsafe { CStr::from_ptr(qcorr_status_message(s)) };
        assert!(!m.to_bytes().is_empty());
    }
    unsafe {
        qcorr_state_free(ptr::null_mut());
        qcorr_trajectory_free(ptr::null_mut());
    }
    assert_eq!(unsafe { qcorr_trajectory_len(ptr::null()) }, 0);
}

#[test]
fn generated_header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qcorr.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "qcorr_measure",
        "qcorr_evolve",
        "qcorr_qnd_apply",
        "qcorr_state_free",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
