//! C ABI over `isac_rs`.
//!
//! Scenarios are opaque heap handles. Every entry point returns an
//! [`IsacStatus`]; on failure the message is available from
//! [`isac_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use isac_rs::config::make_pattern;
use isac_rs::optim::{DesignPoint, DesignStatus};
use isac_rs::scenario::{load_scenario, parse_scenario, Scenario};
use isac_rs::{comm, sensing, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsacStatus {
    Ok = 0,
    /// Malformed or out-of-range input.
    Input = 2,
    Infeasible = 3,
    Numeric = 4,
    NullPointer = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Opaque scenario handle.
pub struct IsacScenario {
    inner: Scenario,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IsacCrb {
    /// Range bound, m².
    pub crb_range: f64,
    /// Velocity bound, (m/s)².
    pub crb_velocity: f64,
    /// η·crb_range + (1 − η)·crb_velocity.
    pub crb_weighted: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IsacDesign {
    pub pc: u32,
    pub ps: u32,
    pub crb_weighted: f64,
    /// bit/s.
    pub rate: f64,
    pub feasible: bool,
}

/// `status` is 0 solved, 1 infeasible, 2 relaxed solution only.
/// Fields guarded by a `has_` flag are zero when the flag is false.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IsacOutcome {
    pub status: u32,
    pub c_min: f64,
    pub has_relaxed: bool,
    pub relaxed_pc: f64,
    pub relaxed_ps: f64,
    pub has_rounded: bool,
    pub rounded: IsacDesign,
    pub has_exhaustive: bool,
    pub exhaustive: IsacDesign,
    pub gap_rel: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> IsacStatus {
    match err {
        Error::Infeasible(_) => IsacStatus::Infeasible,
        Error::Numeric(_) | Error::SingularFim { .. } => IsacStatus::Numeric,
        _ => IsacStatus::Input,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Infeasible(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IsacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            IsacStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            IsacStatus::NullPointer
        }
        Ok(Err(Fail::Infeasible(msg))) => {
            set_error(msg);
            IsacStatus::Infeasible
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            IsacStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument(format!("{what} is not valid UTF-8"))))
}

unsafe fn scenario_ref<'a>(p: *const IsacScenario) -> Result<&'a Scenario, Fail> {
    p.as_ref().map(|s| &s.inner).ok_or(Fail::Null("scenario"))
}

unsafe fn scenario_mut<'a>(p: *mut IsacScenario) -> Result<&'a mut Scenario, Fail> {
    p.as_mut().map(|s| &mut s.inner).ok_or(Fail::Null("scenario"))
}

unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_handle(out: *mut *mut IsacScenario, inner: Scenario) -> Result<(), Fail> {
    emit(out, Box::into_raw(Box::new(IsacScenario { inner })))
}

fn design(p: &DesignPoint) -> IsacDesign {
    IsacDesign {
        pc: p.pattern.pc as u32,
        ps: p.pattern.ps as u32,
        crb_weighted: p.crb_weighted,
        rate: p.rate,
        feasible: p.feasible,
    }
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn isac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn isac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Reference scenario with the default channel profile.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn isac_scenario_reference(out: *mut *mut IsacScenario) -> IsacStatus {
    guard(|| emit_handle(out, Scenario::reference()))
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` as in [`isac_scenario_reference`].
#[no_mangle]
pub unsafe extern "C" fn isac_scenario_from_json(json: *const c_char, out: *mut *mut IsacScenario) -> IsacStatus {
    guard(|| {
        let sc = parse_scenario(str_arg(json, "json")?)?;
        emit_handle(out, sc)
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` as in [`isac_scenario_reference`].
#[no_mangle]
pub unsafe extern "C" fn isac_scenario_load(path: *const c_char, out: *mut *mut IsacScenario) -> IsacStatus {
    guard(|| {
        let sc = load_scenario(str_arg(path, "path")?)?;
        emit_handle(out, sc)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn isac_scenario_free(scenario: *mut IsacScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isac_scenario_set_eta(scenario: *mut IsacScenario, eta: f64) -> IsacStatus {
    guard(|| {
        let sc = scenario_mut(scenario)?;
        let cfg = sc.config.clone().with_eta(eta);
        cfg.validate()?;
        sc.config = cfg;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn isac_scenario_set_rate_floor(scenario: *mut IsacScenario, c_min_bps: f64) -> IsacStatus {
    guard(|| {
        let sc = scenario_mut(scenario)?;
        let cfg = sc.config.clone().with_rate_floor(c_min_bps);
        cfg.validate()?;
        sc.config = cfg;
        Ok(())
    })
}

/// Closed-form bounds at real-valued intervals.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_crb_closed(scenario: *const IsacScenario, pc: f64, ps: f64, out: *mut IsacCrb) -> IsacStatus {
    guard(|| {
        let r = sensing::crb_closed_report(&scenario_ref(scenario)?.config, pc, ps)?;
        emit(
            out,
            IsacCrb {
                crb_range: r.crb_r,
                crb_velocity: r.crb_v,
                crb_weighted: r.crb_weighted,
            },
        )
    })
}

/// Bounds from the assembled Fisher information of an integer pattern.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_crb_fim(scenario: *const IsacScenario, pc: u32, ps: u32, out: *mut IsacCrb) -> IsacStatus {
    guard(|| {
        let cfg = &scenario_ref(scenario)?.config;
        let fim = sensing::fim_assemble(cfg, &make_pattern(cfg, pc as usize, ps as usize)?)?;
        let r = sensing::crb_from_fim(&fim, cfg.weight_eta)?;
        emit(
            out,
            IsacCrb {
                crb_range: r.crb_r,
                crb_velocity: r.crb_v,
                crb_weighted: r.crb_weighted,
            },
        )
    })
}

/// Achievable rate in bit/s of an integer pattern.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_rate(scenario: *const IsacScenario, pc: u32, ps: u32, out: *mut f64) -> IsacStatus {
    guard(|| {
        let sc = scenario_ref(scenario)?;
        let pattern = make_pattern(&sc.config, pc as usize, ps as usize)?;
        let mse = comm::mse_taylor(&sc.profile, pc as f64, ps as f64)?;
        emit(out, comm::rate_exact(&sc.config, &sc.profile, &pattern, &mse))
    })
}

/// Highest rate reachable inside the scenario's search box.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_max_rate(scenario: *const IsacScenario, out: *mut f64) -> IsacStatus {
    guard(|| {
        let top = scenario_ref(scenario)?.problem()?.max_rate()?;
        emit(out, top)
    })
}

/// Relaxed, rounded and exhaustive designs at the scenario's rate floor.
/// Returns `Infeasible` when no pattern meets the floor; `out` is still filled.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isac_optimize(scenario: *const IsacScenario, out: *mut IsacOutcome) -> IsacStatus {
    guard(|| {
        let o = scenario_ref(scenario)?.problem()?.solve()?;
        let mut res = IsacOutcome {
            status: match o.status {
                DesignStatus::Ok => 0,
                DesignStatus::Infeasible => 1,
                DesignStatus::RelaxedOnly => 2,
            },
            c_min: o.c_min,
            gap_rel: o.gap_rel.unwrap_or(0.0),
            ..IsacOutcome::default()
        };
        if let Some(r) = o.relaxed {
            res.has_relaxed = true;
            res.relaxed_pc = r.design.pc;
            res.relaxed_ps = r.design.ps;
        }
        if let Some(p) = o.rounded {
            res.has_rounded = true;
            res.rounded = design(&p);
        }
        if let Some(p) = o.exhaustive {
            res.has_exhaustive = true;
            res.exhaustive = design(&p);
        }
        emit(out, res)?;
        if o.status == DesignStatus::Infeasible {
            return Err(Fail::Infeasible(format!("no pattern reaches {} bit/s", o.c_min)));
        }
        Ok(())
    })
}
