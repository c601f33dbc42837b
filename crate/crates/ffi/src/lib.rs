//! C ABI for the `lisl` solver.
//!
//! Problems are the built-in benchmarks, looked up by name. Every function
//! returns a [`LislStatus`]; on failure a description is available from
//! [`lisl_last_error_message`] on the same thread. Handles are opaque and
//! must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lisl::bench::{self, BenchmarkSpec};
use lisl::report::sup_error;
use lisl::scheme::check_cfl;
use lisl::{Error, Scheme, SchemeConfig, Solution, StencilVariant};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LislStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownProblem = 3,
    CflViolation = 4,
    SolvabilityViolation = 5,
    HowardNonConvergence = 6,
    LinearSolveFailed = 7,
    Unsupported = 8,
    Io = 9,
    Panic = 10,
}

/// Discretization parameters. Obtain defaults with
/// [`lisl_problem_default_params`] and adjust fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LislParams {
    pub dx: f64,
    /// Stencil parameter `k`.
    pub k: f64,
    /// Time-stepping weight in `[0, 1]`.
    pub theta: f64,
    pub time_steps: u32,
    /// Stencil variant, 1 to 5.
    pub variant: u32,
    /// Samples per control parameter.
    pub control_resolution: u32,
    /// Evaluation budget refining sampled controls in Howard's method.
    pub control_refinement: u32,
}

/// CFL check result.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LislCflReport {
    /// Nonzero if the time step satisfies the restriction.
    pub pass: i32,
    /// Largest admissible time step; infinity when unrestricted.
    pub max_allowed_dt: f64,
    /// Largest time step with unique solvability; infinity when unrestricted.
    pub solvability_max_dt: f64,
}

/// A built-in benchmark problem.
pub struct LislProblem {
    spec: BenchmarkSpec,
}

/// A computed solution at the final time.
pub struct LislSolution {
    spec: BenchmarkSpec,
    solution: Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(err: &Error) -> LislStatus {
    match err {
        Error::Precondition(_) | Error::UnknownVariant(_) => LislStatus::InvalidArgument,
        Error::UnknownProblem(_) => LislStatus::UnknownProblem,
        Error::Cfl { .. } => LislStatus::CflViolation,
        Error::Solvability { .. } => LislStatus::SolvabilityViolation,
        Error::HowardNonConvergence { .. } => LislStatus::HowardNonConvergence,
        Error::LinearSolve { .. } => LislStatus::LinearSolveFailed,
        Error::Unsupported(_) => LislStatus::Unsupported,
        Error::Io(_) => LislStatus::Io,
    }
}

/// Runs `f`, recording errors and converting panics into [`LislStatus::Panic`].
fn guarded(f: impl FnOnce() -> Result<(), (LislStatus, String)>) -> LislStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            LislStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            LislStatus::Panic
        }
    }
}

fn lisl_err(err: Error) -> (LislStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (LislStatus, String) {
    (LislStatus::NullPointer, format!("`{what}` is null"))
}

fn variant_from(n: u32) -> Result<StencilVariant, (LislStatus, String)> {
    n.to_string()
        .parse()
        .map_err(|_| (LislStatus::InvalidArgument, format!("stencil variant must be 1 to 5, got {n}")))
}

fn variant_number(v: StencilVariant) -> u32 {
    match v {
        StencilVariant::Falcone => 1,
        StencilVariant::CrandallLions => 2,
        StencilVariant::CamilliFalcone => 3,
        StencilVariant::CombinedDriftDiffusion => 4,
        StencilVariant::MergedLastColumn => 5,
    }
}

fn config_from(params: &LislParams) -> Result<SchemeConfig, (LislStatus, String)> {
    let mut cfg = SchemeConfig::new(
        params.theta,
        params.k,
        params.dx,
        params.time_steps as usize,
        variant_from(params.variant)?,
    )
    .with_controls(params.control_resolution as usize);
    cfg.howard.control_refinement = params.control_refinement as usize;
    Ok(cfg)
}

/// Looks up a built-in benchmark (`convergence-superrep`,
/// `pricing-superrep`, `smooth-1d`) and stores a new handle in `*out`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lisl_problem_new(name: *const c_char, out: *mut *mut LislProblem) -> LislStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| (LislStatus::InvalidArgument, "problem name is not UTF-8".to_string()))?;
        let spec = bench::by_name(name).map_err(lisl_err)?;
        *out = Box::into_raw(Box::new(LislProblem { spec }));
        Ok(())
    })
}

/// Releases a problem handle. Null is ignored.
///
/// # Safety
/// `problem` must come from [`lisl_problem_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lisl_problem_free(problem: *mut LislProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Fills `*out` with the benchmark's default parameters at mesh size `dx`
/// (`k = sqrt(dx)`, `N_T = T / dx`).
///
/// # Safety
/// `problem` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lisl_problem_default_params(
    problem: *const LislProblem,
    dx: f64,
    out: *mut LislParams,
) -> LislStatus {
    guarded(|| {
        let problem = problem.as_ref().ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err((LislStatus::InvalidArgument, format!("dx must be positive, got {dx}")));
        }
        let cfg = problem.spec.config(dx);
        *out = LislParams {
            dx: cfg.dx,
            k: cfg.k,
            theta: cfg.theta,
            time_steps: cfg.time_steps as u32,
            variant: variant_number(cfg.variant),
            control_resolution: cfg.control_resolution as u32,
            control_refinement: cfg.howard.control_refinement as u32,
        };
        Ok(())
    })
}

/// Checks the time-step restriction for `params` without solving.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lisl_check_cfl(
    problem: *const LislProblem,
    params: *const LislParams,
    out: *mut LislCflReport,
) -> LislStatus {
    guarded(|| {
        let problem = problem.as_ref().ok_or_else(|| null("problem"))?;
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = check_cfl(&problem.spec.problem, &config_from(params)?).map_err(lisl_err)?;
        *out = LislCflReport {
            pass: report.pass as i32,
            max_allowed_dt: report.max_allowed_dt.unwrap_or(f64::INFINITY),
            solvability_max_dt: report.solvability_max_dt.unwrap_or(f64::INFINITY),
        };
        Ok(())
    })
}

/// Solves the problem up to its horizon and stores a new solution handle in
/// `*out`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lisl_solve(
    problem: *const LislProblem,
    params: *const LislParams,
    out: *mut *mut LislSolution,
) -> LislStatus {
    guarded(|| {
        let problem = problem.as_ref().ok_or_else(|| null("problem"))?;
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let scheme = Scheme::new(problem.spec.problem.clone(), config_from(params)?).map_err(lisl_err)?;
        let solution = scheme.solve(false).map_err(lisl_err)?;
        *out = Box::into_raw(Box::new(LislSolution {
            spec: problem.spec.clone(),
            solution,
        }));
        Ok(())
    })
}

/// Releases a solution handle. Null is ignored.
///
/// # Safety
/// `solution` must come from [`lisl_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_free(solution: *mut LislSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Number of grid nodes (0 for a null handle).
///
/// # Safety
/// `solution` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_node_count(solution: *const LislSolution) -> usize {
    solution
        .as_ref()
        .map_or(0, |s| s.solution.final_field.grid().node_count())
}

/// Spatial dimension, 1 or 2 (0 for a null handle).
///
/// # Safety
/// `solution` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_dim(solution: *const LislSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.solution.final_field.grid().dim())
}

/// Final time of the solution (NaN for a null handle).
///
/// # Safety
/// `solution` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_final_time(solution: *const LislSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.solution.final_time)
}

/// Copies the nodal values into `values[0..len]`; `len` must equal the node
/// count.
///
/// # Safety
/// `values` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_values(
    solution: *const LislSolution,
    values: *mut f64,
    len: usize,
) -> LislStatus {
    guarded(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if values.is_null() {
            return Err(null("values"));
        }
        let v = s.solution.final_field.values();
        if len != v.len() {
            return Err((
                LislStatus::InvalidArgument,
                format!("buffer holds {len} values, solution has {}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), values, len);
        Ok(())
    })
}

/// Copies node coordinates into `coords[0..2*len]` as `(x1, x2)` pairs (the
/// second entry is 0 in one dimension); `len` must equal the node count.
///
/// # Safety
/// `coords` must point to `2 * len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_nodes(
    solution: *const LislSolution,
    coords: *mut f64,
    len: usize,
) -> LislStatus {
    guarded(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let grid = s.solution.final_field.grid();
        if len != grid.node_count() {
            return Err((
                LislStatus::InvalidArgument,
                format!("buffer holds {len} nodes, solution has {}", grid.node_count()),
            ));
        }
        let out = std::slice::from_raw_parts_mut(coords, 2 * len);
        for (i, x) in grid.nodes().enumerate() {
            out[2 * i] = x[0];
            out[2 * i + 1] = x[1];
        }
        Ok(())
    })
}

/// Total number of Howard linear solves over all steps.
///
/// # Safety
/// `solution` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_howard_iterations(solution: *const LislSolution) -> usize {
    solution.as_ref().map_or(0, |s| {
        s.solution.diagnostics.iter().map(|d| d.howard_iterations).sum()
    })
}

/// Sup-norm error against the exact solution at the final time; fails with
/// [`LislStatus::Unsupported`] when the problem has none.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lisl_solution_sup_error(solution: *const LislSolution, out: *mut f64) -> LislStatus {
    guarded(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sup_error(&s.solution.final_field, &s.spec.problem, s.solution.final_time).map_err(lisl_err)?;
        Ok(())
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn lisl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code, e.g. `"cfl-violation"`.
#[no_mangle]
pub extern "C" fn lisl_status_name(status: LislStatus) -> *const c_char {
    let name: &'static CStr = match status {
        LislStatus::Ok => c"ok",
        LislStatus::NullPointer => c"null-pointer",
        LislStatus::InvalidArgument => c"invalid-argument",
        LislStatus::UnknownProblem => c"unknown-problem",
        LislStatus::CflViolation => c"cfl-violation",
        LislStatus::SolvabilityViolation => c"solvability-violation",
        LislStatus::HowardNonConvergence => c"howard-non-convergence",
        LislStatus::LinearSolveFailed => c"linear-solve-failed",
        LislStatus::Unsupported => c"unsupported",
        LislStatus::Io => c"io",
        LislStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Library version, e.g. `"0.1.0"`.
#[no_mangle]
pub extern "C" fn lisl_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"unknown",
    };
    VERSION.as_ptr()
}
