// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use eapms_ffi::*;

const INSTANCE_A: &str = r#"{
    "task_types": [{"count": 2}, {"count": 1}],
    "machine_types": [{"count": 1}, {"count": 1}],
    "etc": [[1.0, 2.0], [3.0, 1.0]],
    "apc": [[2.0, 1.0], [1.0, 2.0]],
    "price": 10.0,
    "energy_cost": 1.0
}"#;

fn instance_a() -> *mut EapmsInstance {
    let json = CString::new(INSTANCE_A).unwrap();
    let mut inst = ptr::null_mut();
    let status = unsafe { eapms_instance_from_json(json.as_ptr(), &mut inst) };
    assert_eq!(status, EapmsStatus::Ok);
    inst
}

fn last_error() -> String {
    let p = eapms_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn ttb_through_the_c_abi() {
    let inst = instance_a();
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(eapms_solve_ttb(inst, 0.1, &mut report), EapmsStatus::Ok);
        assert_eq!(eapms_report_profit_rate(report), 2.0);
        assert_eq!(eapms_report_makespan(report), 2.0);
        assert_eq!(eapms_report_energy(report), 6.0);
        let mut ms = 0.0;
        assert!(eapms_report_ms_candidate(report, &mut ms));
        assert!(ms >= 2.0);
        let mut method = EapmsMethod::Oracle;
        assert_eq!(eapms_report_method(report, &mut method), EapmsStatus::Ok);
        assert_eq!(method, EapmsMethod::Ttb);
        let mut counts = [9u64; 2];
        assert_eq!(
            eapms_report_machine_tasks(report, 1, 0, counts.as_mut_ptr(), 2),
            EapmsStatus::Ok
        );
        assert_eq!(counts, [0, 1]);
        assert_eq!(
            eapms_report_machine_tasks(report, 1, 1, counts.as_mut_ptr(), 2),
            EapmsStatus::Contract
        );
        assert_eq!(
            eapms_report_machine_tasks(report, 0, 0, counts.as_mut_ptr(), 3),
            EapmsStatus::Contract
        );
        eapms_report_free(report);
        eapms_instance_free(inst);
    }
}

#[test]
fn oracle_tms_and_gamma() {
    let inst = instance_a();
    unsafe {
        let mut oracle = ptr::null_mut();
        assert_eq!(
            eapms_solve_oracle(inst, 1_000_000, &mut oracle),
            EapmsStatus::Ok
        );
        assert_eq!(eapms_report_profit_rate(oracle), 2.0);
        assert!(!eapms_report_ms_candidate(oracle, &mut 0.0));
        eapms_report_free(oracle);

        let mut starved = ptr::null_mut();
        assert_eq!(
            eapms_solve_oracle(inst, 2, &mut starved),
            EapmsStatus::Budget
        );
        assert!(starved.is_null());
        assert!(last_error().contains("budget"));

        let mut tms = ptr::null_mut();
        assert_eq!(eapms_solve_tms(inst, &mut tms), EapmsStatus::Ok);
        assert!(eapms_report_profit_rate(tms) <= 2.0);
        eapms_report_free(tms);

        assert_eq!(eapms_instance_e_min(inst), 6.0);
        let mut even = ptr::null_mut();
        assert_eq!(
            eapms_instance_with_gamma(inst, 1.0, &mut even),
            EapmsStatus::Ok
        );
        let mut r = ptr::null_mut();
        assert_eq!(eapms_solve_ttb(even, 0.1, &mut r), EapmsStatus::Ok);
        assert!(eapms_report_profit_rate(r).abs() <= 1e-9);
        eapms_report_free(r);
        eapms_instance_free(even);
        eapms_instance_free(inst);
    }
}

#[test]
fn arrays_and_json_agree() {
    let tasks = [2u64, 1];
    let machines = [1u64, 1];
    let etc = [1.0, 2.0, 3.0, 1.0];
    let apc = [2.0, 1.0, 1.0, 2.0];
    let mut inst = ptr::null_mut();
    unsafe {
        let s = eapms_instance_new(
            2,
            2,
            tasks.as_ptr(),
            machines.as_ptr(),
            etc.as_ptr(),
            apc.as_ptr(),
            10.0,
            1.0,
            &mut inst,
        );
        assert_eq!(s, EapmsStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(eapms_instance_to_json(inst, &mut json), EapmsStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        eapms_string_free(json);
        let expected = eapms::cli::parse_instance(INSTANCE_A).unwrap();
        assert_eq!(eapms::cli::parse_instance(&text).unwrap(), expected);
        eapms_instance_free(inst);
    }
}

#[test]
fn errors_are_codes_not_crashes() {
    let mut inst = ptr::null_mut();
    unsafe {
        assert_eq!(
            eapms_instance_from_json(ptr::null(), &mut inst),
            EapmsStatus::NullPointer
        );
        let ragged = CString::new(INSTANCE_A.replace("[3.0, 1.0]", "[3.0]")).unwrap();
        assert_eq!(
            eapms_instance_from_json(ragged.as_ptr(), &mut inst),
            EapmsStatus::Parse
        );
        let negative = CString::new(INSTANCE_A.replace("[1.0, 2.0]]", "[1.0, -2.0]]")).unwrap();
        assert_eq!(
            eapms_instance_from_json(negative.as_ptr(), &mut inst),
            EapmsStatus::Validation
        );
        assert!(inst.is_null());
        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            eapms_instance_from_json(bad_utf8.as_ptr().cast(), &mut inst),
            EapmsStatus::InvalidUtf8
        );

        let mut report = ptr::null_mut();
        assert_eq!(
            eapms_solve_ttb(ptr::null(), 0.1, &mut report),
            EapmsStatus::NullPointer
        );
        let a = instance_a();
        assert_eq!(
            eapms_solve_ttb(a, 0.0, &mut report),
            EapmsStatus::Validation
        );
        assert!(last_error().contains("epsilon"));
        assert!(eapms_report_makespan(ptr::null()).is_nan());
        eapms_report_free(ptr::null_mut());
        eapms_instance_free(ptr::null_mut());
        eapms_instance_free(a);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(eapms_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/eapms.h")).unwrap();
    let source = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(header.contains("typedef struct EapmsInstance EapmsInstance;"));
    assert!(header.contains("EAPMS_STATUS_BUDGET = 6"));
}

/// Directory holding the library artifacts of the current profile.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = artifact_dir().join("libeapms_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!(
            "skipping: no C compiler or no static library at {}",
            lib.display()
        );
        return;
    }
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let build = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok"));
}
