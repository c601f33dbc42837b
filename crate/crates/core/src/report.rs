//! Error norms, convergence tables and observed rates.

use std::io::Write;

use crate::bench::BenchmarkSpec;
use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::problem::{HjbProblem, Point};
use crate::scheme::{Scheme, SchemeConfig};

/// `max_i |U_i - u(t, x_i)|`.
pub fn sup_error_with(field: &GridField, exact: impl Fn(f64, &Point) -> f64, t: f64) -> f64 {
    let grid = field.grid();
    field
        .values()
        .iter()
        .enumerate()
        .fold(0.0f64, |m, (i, v)| m.max((v - exact(t, &grid.node(i))).abs()))
}

/// Sup-norm error against the problem's exact solution.
pub fn sup_error(field: &GridField, problem: &HjbProblem, t: f64) -> Result<f64> {
    match &problem.exact_solution {
        Some(u) => Ok(sup_error_with(field, |s, x| u(s, x), t)),
        None => Err(Error::Unsupported(format!("problem `{}` has no exact solution", problem.name))),
    }
}

/// `ln(e_prev / e) / ln(dx_prev / dx)`.
pub fn observed_rate(dx_prev: f64, e_prev: f64, dx: f64, e: f64) -> f64 {
    (e_prev / e).ln() / (dx_prev / dx).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub sup_error: f64,
    /// Absent on the first row.
    pub rate: Option<f64>,
}

/// Rows completed so far and, if a level failed, the failure.
#[derive(Debug)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub failure: Option<Error>,
}

pub fn rows_from_errors(levels: &[(f64, f64)]) -> Vec<ConvergenceRow> {
    levels
        .iter()
        .enumerate()
        .map(|(i, &(dx, e))| ConvergenceRow {
            dx,
            sup_error: e,
            rate: (i > 0).then(|| observed_rate(levels[i - 1].0, levels[i - 1].1, dx, e)),
        })
        .collect()
}

fn check_levels(levels: &[f64]) -> Result<()> {
    for w in levels.windows(2) {
        if !(w[1] < w[0]) || ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
            return Err(crate::error::precondition("levels must halve strictly"));
        }
    }
    Ok(())
}

/// Runs the benchmark at each level with its parameter map; `adjust` may
/// override configuration fields per level.
pub fn convergence_study_with(
    spec: &BenchmarkSpec,
    levels: &[f64],
    adjust: impl Fn(&mut SchemeConfig),
) -> Result<ConvergenceStudy> {
    check_levels(levels)?;
    let mut errors = Vec::with_capacity(levels.len());
    let mut failure = None;
    for &dx in levels {
        let mut config = spec.config(dx);
        adjust(&mut config);
        let outcome = Scheme::new(spec.problem.clone(), config)
            .and_then(|s| s.solve(false))
            .and_then(|sol| sup_error(&sol.final_field, &spec.problem, sol.final_time));
        match outcome {
            Ok(e) => errors.push((dx, e)),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    Ok(ConvergenceStudy {
        rows: rows_from_errors(&errors),
        failure,
    })
}

pub fn convergence_study(spec: &BenchmarkSpec, levels: &[f64]) -> Result<ConvergenceStudy> {
    convergence_study_with(spec, levels, |_| {})
}

pub fn write_table<W: Write>(rows: &[ConvergenceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{:>10}  {:>10}  {:>6}", "dx", "|u-U|_0", "rate")?;
    for r in rows {
        let rate = r.rate.map_or("-".to_string(), |v| format!("{v:.2}"));
        writeln!(out, "{:>10.2e}  {:>10.2e}  {:>6}", r.dx, r.sup_error, rate)?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(rows: &[ConvergenceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "dx,sup_error,rate")?;
    for r in rows {
        let rate = r.rate.map_or(String::new(), |v| format!("{v:.16e}"));
        writeln!(out, "{:.16e},{:.16e},{}", r.dx, r.sup_error, rate)?;
    }
    Ok(())
}
