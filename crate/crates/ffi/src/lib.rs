// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over the `eapms` scheduling toolkit.
//!
//! Instances and reports are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns an
//! [`EapmsStatus`]; on failure, [`eapms_last_error_message`] describes the
//! error for the calling thread. Panics never cross the boundary.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use eapms::cli::{instance_to_json, parse_instance};
use eapms::model::e_min;
use eapms::oracle::{exact_opt, OracleBudget};
use eapms::solver::{tms_solve, ttb_solve, SweepConfig};
use eapms::{Error, Instance, Method, SolutionReport};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EapmsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Contract = 5,
    Budget = 6,
    Infeasible = 7,
    Degenerate = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EapmsMethod {
    Ttb = 0,
    Tms = 1,
    Oracle = 2,
    MinEnergy = 3,
}

/// Opaque validated problem instance.
pub struct EapmsInstance(Instance);

/// Opaque solution report.
pub struct EapmsReport(SolutionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EapmsStatus {
    match e {
        Error::Parse(_) | Error::Io(_) => EapmsStatus::Parse,
        Error::Validation(_) => EapmsStatus::Validation,
        Error::Contract(_) => EapmsStatus::Contract,
        Error::BudgetExceeded { .. } | Error::CandidateCap { .. } => EapmsStatus::Budget,
        Error::CandidateInfeasible { .. } | Error::LpStatus(_) | Error::MalformedSlotGraph(_) => {
            EapmsStatus::Infeasible
        }
        Error::DegenerateMakespan { .. } => EapmsStatus::Degenerate,
        Error::Internal(_) => EapmsStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (EapmsStatus, String)>) -> EapmsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EapmsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside eapms".into());
            EapmsStatus::Panic
        }
    }
}

fn lift(e: Error) -> (EapmsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EapmsStatus, String) {
    (EapmsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eapms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eapms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance from a JSON document (same format as instance files).
#[no_mangle]
pub unsafe extern "C" fn eapms_instance_from_json(
    json: *const c_char,
    out: *mut *mut EapmsInstance,
) -> EapmsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (EapmsStatus::InvalidUtf8, e.to_string()))?;
        let inst = parse_instance(text).map_err(lift)?;
        write_out(out, EapmsInstance(inst));
        Ok(())
    })
}

/// Builds an instance from flat arrays.
///
/// `task_counts` has `task_types` entries, `machine_counts` has
/// `machine_types` entries, and `etc`/`apc` are row-major
/// `task_types x machine_types` matrices.
#[no_mangle]
pub unsafe extern "C" fn eapms_instance_new(
    task_types: usize,
    machine_types: usize,
    task_counts: *const u64,
    machine_counts: *const u64,
    etc: *const f64,
    apc: *const f64,
    price: f64,
    energy_cost: f64,
    out: *mut *mut EapmsInstance,
) -> EapmsStatus {
    guard(|| {
        for (p, name) in [
            (task_counts.cast::<u8>(), "task_counts"),
            (machine_counts.cast(), "machine_counts"),
            (etc.cast(), "etc"),
            (apc.cast(), "apc"),
        ] {
            if p.is_null() {
                return Err(null(name));
            }
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let cells = task_types
            .checked_mul(machine_types)
            .ok_or_else(|| (EapmsStatus::Validation, "dimensions overflow".to_owned()))?;
        let rows = |flat: &[f64]| -> Vec<Vec<f64>> {
            if machine_types == 0 {
                vec![Vec::new(); task_types]
            } else {
                flat.chunks(machine_types).map(<[f64]>::to_vec).collect()
            }
        };
        let inst = Instance::new(
            slice::from_raw_parts(task_counts, task_types).to_vec(),
            slice::from_raw_parts(machine_counts, machine_types).to_vec(),
            rows(slice::from_raw_parts(etc, cells)),
            rows(slice::from_raw_parts(apc, cells)),
            price,
            energy_cost,
        )
        .map_err(lift)?;
        write_out(out, EapmsInstance(inst));
        Ok(())
    })
}

/// Copy of `inst` priced at `gamma * E_min`.
#[no_mangle]
pub unsafe extern "C" fn eapms_instance_with_gamma(
    inst: *const EapmsInstance,
    gamma: f64,
    out: *mut *mut EapmsInstance,
) -> EapmsStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err((
                EapmsStatus::Validation,
                format!("gamma {gamma} must be positive"),
            ));
        }
        let priced = inst.0.with_price(gamma * e_min(&inst.0)).map_err(lift)?;
        write_out(out, EapmsInstance(priced));
        Ok(())
    })
}

/// Minimum total energy ignoring makespan, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn eapms_instance_e_min(inst: *const EapmsInstance) -> f64 {
    inst.as_ref().map_or(f64::NAN, |i| e_min(&i.0))
}

/// Serializes `inst` to JSON. Release the string with [`eapms_string_free`].
#[no_mangle]
pub unsafe extern "C" fn eapms_instance_to_json(
    inst: *const EapmsInstance,
    out: *mut *mut c_char,
) -> EapmsStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(instance_to_json(&inst.0)).expect("JSON has no NUL bytes");
        *out = s.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn eapms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn eapms_instance_free(inst: *mut EapmsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

unsafe fn solve_with(
    inst: *const EapmsInstance,
    out: *mut *mut EapmsReport,
    solve: impl FnOnce(&Instance) -> eapms::Result<SolutionReport>,
) -> EapmsStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = solve(&inst.0).map_err(lift)?;
        write_out(out, EapmsReport(report));
        Ok(())
    })
}

/// Task-type-based sweep with approximation parameter `epsilon`.
#[no_mangle]
pub unsafe extern "C" fn eapms_solve_ttb(
    inst: *const EapmsInstance,
    epsilon: f64,
    out: *mut *mut EapmsReport,
) -> EapmsStatus {
    solve_with(inst, out, |i| {
        ttb_solve(i, &SweepConfig::with_epsilon(epsilon))
    })
}

/// TMS baseline (reconstructed rounding).
#[no_mangle]
pub unsafe extern "C" fn eapms_solve_tms(
    inst: *const EapmsInstance,
    out: *mut *mut EapmsReport,
) -> EapmsStatus {
    solve_with(inst, out, tms_solve)
}

/// Exact optimum by enumeration; fails with `Budget` past `max_states` nodes.
#[no_mangle]
pub unsafe extern "C" fn eapms_solve_oracle(
    inst: *const EapmsInstance,
    max_states: u64,
    out: *mut *mut EapmsReport,
) -> EapmsStatus {
    solve_with(inst, out, |i| exact_opt(i, OracleBudget { max_states }))
}

#[no_mangle]
pub unsafe extern "C" fn eapms_report_free(report: *mut EapmsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[no_mangle]
pub unsafe extern "C" fn eapms_report_makespan(report: *const EapmsReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.makespan)
}

#[no_mangle]
pub unsafe extern "C" fn eapms_report_energy(report: *const EapmsReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.energy)
}

#[no_mangle]
pub unsafe extern "C" fn eapms_report_profit_rate(report: *const EapmsReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.profit_rate)
}

/// Writes the makespan target that produced the schedule; returns false when
/// the method has none (TMS, oracle) or the handle is null.
#[no_mangle]
pub unsafe extern "C" fn eapms_report_ms_candidate(
    report: *const EapmsReport,
    out: *mut f64,
) -> bool {
    match (
        report.as_ref().and_then(|r| r.0.ms_candidate),
        out.is_null(),
    ) {
        (Some(ms), false) => {
            *out = ms;
            true
        }
        _ => false,
    }
}

#[no_mangle]
pub unsafe extern "C" fn eapms_report_method(
    report: *const EapmsReport,
    out: *mut EapmsMethod,
) -> EapmsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match r.0.method {
            Method::Ttb => EapmsMethod::Ttb,
            Method::Tms => EapmsMethod::Tms,
            Method::Oracle => EapmsMethod::Oracle,
            Method::MinEnergy => EapmsMethod::MinEnergy,
        };
        Ok(())
    })
}

/// Copies the task counts of machine `k` of type `j` into `counts`
/// (`len` must equal the number of task types).
#[no_mangle]
pub unsafe extern "C" fn eapms_report_machine_tasks(
    report: *const EapmsReport,
    machine_type: usize,
    machine: usize,
    counts: *mut u64,
    len: usize,
) -> EapmsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if counts.is_null() {
            return Err(null("counts"));
        }
        let src =
            r.0.schedule
                .machines()
                .get(machine_type)
                .and_then(|ms| ms.get(machine))
                .ok_or_else(|| {
                    (
                        EapmsStatus::Contract,
                        format!("machine ({machine_type}, {machine}) is out of range"),
                    )
                })?;
        if src.len() != len {
            return Err((
                EapmsStatus::Contract,
                format!("buffer holds {len} counts, schedule has {}", src.len()),
            ));
        }
        slice::from_raw_parts_mut(counts, len).copy_from_slice(src);
        Ok(())
    })
}
