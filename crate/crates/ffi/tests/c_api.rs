use std::ffi::{CStr, CString};
use std::ptr;

use lisl_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(lisl_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn problem(name: &str) -> *mut LislProblem {
    let name = CString::new(name).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { lisl_problem_new(name.as_ptr(), &mut p) }, LislStatus::Ok);
    assert!(!p.is_null());
    p
}

fn defaults(p: *const LislProblem, dx: f64) -> LislParams {
    let mut params = LislParams {
        dx: 0.0,
        k: 0.0,
        theta: 0.0,
        time_steps: 0,
        variant: 0,
        control_resolution: 0,
        control_refinement: 0,
    };
    assert_eq!(unsafe { lisl_problem_default_params(p, dx, &mut params) }, LislStatus::Ok);
    params
}

#[test]
fn smooth_problem_round_trip() {
    let p = problem("smooth-1d");
    let params = defaults(p, 0.1);
    assert_eq!(params.dx, 0.1);
    assert!((params.k - 0.1f64.sqrt()).abs() < 1e-15);
    assert_eq!(params.time_steps, 10);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { lisl_solve(p, &params, &mut s) }, LislStatus::Ok, "{}", last_error());
    assert_eq!(last_error(), "");

    let n = unsafe { lisl_solution_node_count(s) };
    assert_eq!(unsafe { lisl_solution_dim(s) }, 1);
    assert_eq!(unsafe { lisl_solution_final_time(s) }, 1.0);
    let mut values = vec![0.0; n];
    let mut coords = vec![0.0; 2 * n];
    assert_eq!(unsafe { lisl_solution_values(s, values.as_mut_ptr(), n) }, LislStatus::Ok);
    assert_eq!(unsafe { lisl_solution_nodes(s, coords.as_mut_ptr(), n) }, LislStatus::Ok);
    assert!(values.iter().all(|v| v.is_finite()));
    assert_eq!(coords[0], 0.0);
    assert!(unsafe { lisl_solution_howard_iterations(s) } >= 10);

    let mut err = f64::NAN;
    assert_eq!(unsafe { lisl_solution_sup_error(s, &mut err) }, LislStatus::Ok);
    assert!(err > 0.0 && err < 0.1, "sup error {err}");

    unsafe {
        lisl_solution_free(s);
        lisl_problem_free(p);
    }
}

#[test]
fn unknown_problem_is_reported() {
    let name = CString::new("no-such-problem").unwrap();
    let mut p = ptr::null_mut();
    let status = unsafe { lisl_problem_new(name.as_ptr(), &mut p) };
    assert_eq!(status, LislStatus::UnknownProblem);
    assert!(p.is_null());
    assert!(last_error().contains("no-such-problem"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { lisl_problem_new(ptr::null(), &mut p) }, LislStatus::NullPointer);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { lisl_solve(ptr::null(), ptr::null(), &mut s) }, LislStatus::NullPointer);
    assert!(last_error().contains("null"));
    assert_eq!(unsafe { lisl_solution_node_count(ptr::null()) }, 0);
    unsafe {
        lisl_problem_free(ptr::null_mut());
        lisl_solution_free(ptr::null_mut());
    }
}

#[test]
fn explicit_step_beyond_cfl_is_refused() {
    let p = problem("smooth-1d");
    let mut params = defaults(p, 0.1);
    params.theta = 0.0;

    let mut report = LislCflReport {
        pass: 1,
        max_allowed_dt: 0.0,
        solvability_max_dt: 0.0,
    };
    assert_eq!(unsafe { lisl_check_cfl(p, &params, &mut report) }, LislStatus::Ok);
    assert_eq!(report.pass, 0);
    assert!(report.max_allowed_dt < 0.1);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { lisl_solve(p, &params, &mut s) }, LislStatus::CflViolation);
    assert!(s.is_null());
    assert!(last_error().contains("CFL"));
    unsafe { lisl_problem_free(p) };
}

#[test]
fn bad_variant_and_buffer_length() {
    let p = problem("smooth-1d");
    let mut params = defaults(p, 0.1);
    params.variant = 9;
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { lisl_solve(p, &params, &mut s) }, LislStatus::InvalidArgument);

    params.variant = 3;
    assert_eq!(unsafe { lisl_solve(p, &params, &mut s) }, LislStatus::Ok);
    let n = unsafe { lisl_solution_node_count(s) };
    let mut values = vec![0.0; n + 1];
    assert_eq!(
        unsafe { lisl_solution_values(s, values.as_mut_ptr(), n + 1) },
        LislStatus::InvalidArgument
    );
    unsafe {
        lisl_solution_free(s);
        lisl_problem_free(p);
    }
}

#[test]
fn pricing_problem_has_no_exact_solution() {
    let p = problem("pricing-superrep");
    let params = defaults(p, 0.3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { lisl_solve(p, &params, &mut s) }, LislStatus::Ok, "{}", last_error());
    let mut err = 0.0;
    assert_eq!(unsafe { lisl_solution_sup_error(s, &mut err) }, LislStatus::Unsupported);
    unsafe {
        lisl_solution_free(s);
        lisl_problem_free(p);
    }
}

#[test]
fn names_and_version() {
    let name = unsafe { CStr::from_ptr(lisl_status_name(LislStatus::CflViolation)) };
    assert_eq!(name.to_str().unwrap(), "cfl-violation");
    let version = unsafe { CStr::from_ptr(lisl_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lisl.h")).unwrap();
    for item in [
        "LISL_STATUS_CFL_VIOLATION",
        "typedef struct LislProblem LislProblem;",
        "lisl_problem_new",
        "lisl_solve",
        "lisl_solution_values",
        "lisl_last_error_message",
        "lisl_check_cfl",
    ] {
        assert!(header.contains(item), "header lacks {item}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"lisl.h\"\nint main(void) { LislParams p; LislProblem *h = 0;\n\
         return lisl_problem_default_params(h, 0.1, &p) == LISL_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
