//! C interface to the wardplan solvers.
//!
//! Instances and solutions live behind opaque handles. Every function
//! returns a [`WpStatus`]; on failure the message is available from
//! [`wp_last_error`] on the same thread. Strings returned through `out`
//! pointers are owned by the caller and released with [`wp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wardplan::heuristic::{solve_heuristic, HeuristicConfig};
use wardplan::instgen::generate_instance;
use wardplan::instgen::presets::preset_config;
use wardplan::lp::{export_full_mip, export_npa, export_pra, write_lp, ExportOptions};
use wardplan::oracle::{enumerate_optimal, OracleLimits};
use wardplan::{check_feasibility, evaluate, Assignment, Instance, ModelError, Solution, SolveError, Ward};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpStatus {
    Ok = 0,
    Infeasible = 2,
    BudgetExceeded = 3,
    BadInput = 4,
    NullArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpModel {
    Full = 0,
    Pra = 1,
    Npa = 2,
}

/// A validated instance.
pub struct WpInstance {
    instance: Instance,
    ward: Ward,
}

pub struct WpSolution {
    solution: Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(WpStatus, String);

impl From<SolveError> for Fail {
    fn from(e: SolveError) -> Self {
        let status = match e {
            SolveError::Infeasible { .. } | SolveError::InfeasibleSolution(_) | SolveError::RosterInfeasible { .. } => {
                WpStatus::Infeasible
            }
            SolveError::BudgetExceeded { .. } => WpStatus::BudgetExceeded,
            SolveError::Model(_) | SolveError::Mismatch(_) | SolveError::Config(_) => WpStatus::BadInput,
        };
        Fail(status, e.to_string())
    }
}

impl From<ModelError> for Fail {
    fn from(e: ModelError) -> Self {
        Fail(WpStatus::BadInput, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(WpStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, records any error and converts panics into [`WpStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WpStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            WpStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(WpStatus::BadInput, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("json and lp text contain no nul").into_raw();
}

fn wrap_instance(instance: Instance) -> Result<WpInstance, Fail> {
    let ward = Ward::compile(&instance)?;
    Ok(WpInstance { instance, ward })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn wp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn wp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an instance.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_instance_from_json(json: *const c_char, out: *mut *mut WpInstance) -> WpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = Instance::from_json(read_str(json, "json")?)?;
        put(out, wrap_instance(inst)?);
        Ok(())
    })
}

/// Generates an instance from a named preset.
///
/// # Safety
/// `preset` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_instance_generate(
    preset: *const c_char,
    weeks: u32,
    seed: u64,
    out: *mut *mut WpInstance,
) -> WpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(preset, "preset")?;
        let mut cfg =
            preset_config(name).ok_or_else(|| Fail(WpStatus::BadInput, format!("unknown preset `{name}`")))?;
        if weeks > 0 {
            cfg.weeks = weeks as usize;
        }
        put(out, wrap_instance(generate_instance(&cfg, seed)?)?);
        Ok(())
    })
}

/// # Safety
/// `inst` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_instance_to_json(inst: *const WpInstance, out: *mut *mut c_char) -> WpStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, inst.instance.to_json());
        Ok(())
    })
}

/// Number of patients, rooms, nurses and days, written to `counts[0..4]`.
///
/// # Safety
/// `inst` must be a valid handle and `counts` point to four `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn wp_instance_sizes(inst: *const WpInstance, counts: *mut u64) -> WpStatus {
    guard(|| {
        let w = &deref(inst, "instance")?.ward;
        if counts.is_null() {
            return Err(null("counts"));
        }
        let vals = [w.patients.len(), w.rooms.len(), w.nurses.len(), w.num_days()];
        for (k, v) in vals.into_iter().enumerate() {
            *counts.add(k) = v as u64;
        }
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn wp_instance_free(inst: *mut WpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Greedy construction. `max_triples` of 0 keeps every nurse triple.
///
/// # Safety
/// `inst` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_solve_heuristic(
    inst: *const WpInstance,
    max_triples: u32,
    out: *mut *mut WpSolution,
) -> WpStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = HeuristicConfig { max_triples_per_patient: (max_triples > 0).then_some(max_triples as usize) };
        let res = solve_heuristic(&inst.ward, &cfg)?;
        let name = inst.instance.name.clone().unwrap_or_default();
        put(out, WpSolution { solution: res.solution(&inst.ward, &name) });
        Ok(())
    })
}

/// Exhaustive search, for tiny instances only.
///
/// # Safety
/// `inst` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_solve_oracle(
    inst: *const WpInstance,
    max_nodes: u64,
    out: *mut *mut WpSolution,
) -> WpStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let res = enumerate_optimal(&inst.ward, OracleLimits { max_nodes, ..OracleLimits::default() })?;
        let name = inst.instance.name.clone().unwrap_or_default();
        put(out, WpSolution { solution: res.assignment.to_solution(&inst.ward, name) });
        Ok(())
    })
}

/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_solution_from_json(json: *const c_char, out: *mut *mut WpSolution) -> WpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, WpSolution { solution: Solution::from_json(read_str(json, "json")?)? });
        Ok(())
    })
}

/// # Safety
/// `sol` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_solution_to_json(sol: *const WpSolution, out: *mut *mut c_char) -> WpStatus {
    guard(|| {
        let sol = deref(sol, "solution")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, sol.solution.to_json());
        Ok(())
    })
}

/// # Safety
/// `sol` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn wp_solution_free(sol: *mut WpSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Checks hard constraints and scores the solution. `weighted_total` and
/// `breakdown_json` may each be null. An infeasible solution yields
/// [`WpStatus::Infeasible`] and the violation list as the error message.
///
/// # Safety
/// Handles must be valid; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_evaluate(
    inst: *const WpInstance,
    sol: *const WpSolution,
    weighted_total: *mut f64,
    breakdown_json: *mut *mut c_char,
) -> WpStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        let sol = deref(sol, "solution")?;
        let feas = check_feasibility(&inst.ward, &sol.solution)?;
        if !feas.is_feasible() {
            return Err(Fail(WpStatus::Infeasible, wardplan::report::render_violations(&feas)));
        }
        let b = evaluate(&inst.ward, &Assignment::from_solution(&inst.ward, &sol.solution)?);
        if !weighted_total.is_null() {
            *weighted_total = b.weighted_total;
        }
        if !breakdown_json.is_null() {
            put_string(breakdown_json, serde_json::to_string(&b).expect("breakdown serializes"));
        }
        Ok(())
    })
}

/// Writes a linear model in LP text format. `rooms` supplies the fixed room
/// plan for [`WpModel::Npa`] and is ignored otherwise.
///
/// # Safety
/// `inst` must be a valid handle, `rooms` null or a valid handle, `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_export_lp(
    inst: *const WpInstance,
    model: WpModel,
    rooms: *const WpSolution,
    out: *mut *mut c_char,
) -> WpStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = ExportOptions::default();
        let lp = match model {
            WpModel::Full => export_full_mip(&inst.ward, opts)?,
            WpModel::Pra => export_pra(&inst.ward, opts)?,
            WpModel::Npa => {
                let rooms = deref(rooms, "rooms")?;
                export_npa(&inst.ward, &Assignment::from_solution(&inst.ward, &rooms.solution)?, opts)?
            }
        };
        put_string(out, write_lp(&lp));
        Ok(())
    })
}
