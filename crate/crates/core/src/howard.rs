//! Howard's policy iteration for one implicit theta-step.
//!
//! For a fixed policy the step equation is linear, with an M-matrix whose
//! diagonal is `tau/dt - theta (c + L_diag)` and whose off-diagonals are
//! `-theta w_j / (2 k^2)`. Each iteration picks, per node, the control
//! optimising the residual at the current iterate and solves the resulting
//! linear system.
//!
//! For single-parameter control sets the sampled optimum can be refined by a
//! one-dimensional search (Brent's method) between the neighbouring samples
//! ([`HowardSettings::control_refinement`]).

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{precondition, Error, Result};
use crate::grid::GridField;
use crate::problem::{CoefficientValues, EquationForm};
use crate::scheme::{ControlRefiner, Scheme};
use crate::sparse::{CsrMatrix, LinearSolverSettings, SparseSystem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HowardSettings {
    /// Convergence tolerance is `tolerance_factor * (1 + |U^{n-1}|_inf)`.
    pub tolerance_factor: f64,
    /// Maximum number of linear solves per step.
    pub max_iterations: usize,
    /// Evaluation budget of the search refining the best sampled control of
    /// a single-parameter control set; 0 keeps the sampled optimum.
    pub control_refinement: usize,
    pub linear: LinearSolverSettings,
}

impl Default for HowardSettings {
    fn default() -> Self {
        HowardSettings {
            tolerance_factor: 1e-10,
            max_iterations: 100,
            control_refinement: 0,
            linear: LinearSolverSettings::default(),
        }
    }
}

/// One control per node; `None` for Dirichlet nodes and for nodes where no
/// control gives a solvable row.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy(pub Vec<Option<Vec<f64>>>);

#[derive(Debug, Clone)]
pub struct HowardOutcome {
    pub field: GridField,
    /// Number of linear solves.
    pub iterations: usize,
    /// Final sup-norm residual of the nonlinear step equation.
    pub residual: f64,
    /// Residual at the iterate before each solve, then the final one.
    pub history: Vec<f64>,
    pub policy: Policy,
}

/// Per-step data shared by improvement and assembly.
struct StepContext<'a> {
    scheme: &'a Scheme,
    u_prev: &'a [f64],
    t_prev: f64,
    t_next: f64,
    t_coef: f64,
    theta: f64,
    inv_dt: f64,
    /// Per-node source when it does not depend on the control.
    sources: Option<Vec<f64>>,
}

/// A candidate row: diagonal, off-diagonal terms and right-hand side.
struct Row {
    diagonal: f64,
    terms: SmallVec<[(usize, f64); 12]>,
    rhs: f64,
}

impl<'a> StepContext<'a> {
    fn new(scheme: &'a Scheme, u_prev: &'a GridField, n: usize) -> Self {
        let time = scheme.time_grid();
        StepContext {
            scheme,
            u_prev: u_prev.values(),
            t_prev: time.time(n - 1),
            t_next: time.time(n),
            t_coef: scheme.coefficient_time(n),
            theta: scheme.config().theta,
            inv_dt: 1.0 / scheme.dt(),
            sources: scheme.uncontrolled_sources(scheme.coefficient_time(n)),
        }
    }

    /// Row of the linear system for `control` at an interior node.
    fn row(&self, node: usize, control: &[f64]) -> Row {
        let c = self.scheme.coefficients_for(self.t_coef, node, control);
        let op = self.scheme.local_operator(node, &c, self.t_next);
        let scale = c.time_coeff * self.inv_dt;
        let th = self.theta;
        let explicit = if th < 1.0 {
            let old = self.scheme.local_operator(node, &c, self.t_prev);
            (1.0 - th) * (old.apply(self.u_prev) + c.reaction * self.u_prev[node])
        } else {
            0.0
        };
        Row {
            diagonal: scale - th * (op.center + c.reaction),
            terms: op.terms.iter().map(|&(j, w)| (j, -th * w)).collect(),
            rhs: scale * self.u_prev[node] + th * op.constant + explicit + c.source,
        }
    }

    /// Residual of `control` at `u`, or `None` if its row is not solvable.
    fn candidate(&self, node: usize, control: &[f64], u: &[f64]) -> Option<f64> {
        let s = self.scheme;
        let c = match &self.sources {
            Some(f) => CoefficientValues {
                source: f[node],
                ..s.coefficients_without_source(self.t_coef, node, control)
            },
            None => s.coefficients_for(self.t_coef, node, control),
        };
        let (center, self_weight, others, constant) = s.evaluate_operator(node, &c, self.t_next, u);
        let th = self.theta;
        let scale = c.time_coeff * self.inv_dt;
        let merged = scale - th * (center + c.reaction + self_weight);
        if merged <= 0.0 {
            return None;
        }
        let explicit = if th < 1.0 {
            let (oc, osw, oo, ok) = s.evaluate_operator(node, &c, self.t_prev, self.u_prev);
            let up = self.u_prev[node];
            (1.0 - th) * ((oc + osw + c.reaction) * up + oo + ok)
        } else {
            0.0
        };
        let rhs = scale * self.u_prev[node] + th * constant + explicit + c.source;
        Some(merged * u[node] - th * others - rhs)
    }

    fn identity_row(&self, node: usize) -> (Vec<(usize, f64)>, f64) {
        let value = match self.scheme.dirichlet_face(node) {
            Some(face) => self.scheme.dirichlet_value(face, self.t_next, node),
            None => self.u_prev[node],
        };
        (vec![(node, 1.0)], value)
    }
}

/// Brent's minimisation of `badness` over `[lo, hi]`, started from the
/// interior point `x0` with known value `f0`: parabolic steps where the
/// function looks smooth, golden-section steps otherwise. Unsolvable
/// controls evaluate to infinity and force golden-section steps.
fn brent_minimise(
    refiner: &ControlRefiner,
    (lo, hi): (f64, f64),
    (x0, f0): (f64, f64),
    badness: impl Fn(f64) -> f64,
) -> (f64, f64) {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let tol = 1e-7 * (hi - lo);
    let f = |p: f64| badness(refiner.wrap(p));
    let (mut a, mut b) = (lo, hi);
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut fx, mut fw, mut fv) = (f0, f0, f0);
    let (mut d, mut e): (f64, f64) = (0.0, 0.0);
    for _ in 0..refiner.iterations {
        let xm = 0.5 * (a + b);
        let tol2 = 2.0 * tol;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let golden = |x: f64| if x >= xm { a - x } else { b - x };
        let mut parabolic = None;
        if e.abs() > tol && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            let r = (x - w) * (fx - fv);
            let q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            let mut q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                parabolic = Some(p / q);
            }
        }
        match parabolic {
            Some(step) => {
                e = d;
                d = step;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol.copysign(xm - x);
                }
            }
            None => {
                e = golden(x);
                d = GOLDEN * e;
            }
        }
        let u = if d.abs() >= tol { x + d } else { x + tol.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv, w, fw, x, fx) = (w, fw, x, fx, u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv, w, fw) = (w, fw, u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (refiner.wrap(x), fx)
}

/// Policy improvement at iterate `u`. Returns the new policy and the
/// sup-norm residual of the nonlinear equation at `u` (over the controls
/// searched).
fn improve(ctx: &StepContext<'_>, u: &[f64], current: Option<&Policy>, keep_tol: f64) -> (Policy, f64) {
    let scheme = ctx.scheme;
    let controls = scheme.controls();
    let set = &scheme.problem().control_set;
    // badness = sign * residual is minimised
    let sign = match scheme.problem().form {
        EquationForm::ScaledInf => 1.0,
        EquationForm::Standard => -1.0,
    };
    let results: Vec<(Option<Vec<f64>>, f64)> = (0..scheme.grid().node_count())
        .into_par_iter()
        .map(|i| {
            if let Some(face) = scheme.dirichlet_face(i) {
                let g = scheme.dirichlet_value(face, ctx.t_next, i);
                return (None, (u[i] - g).abs());
            }
            let badness = |a: &[f64]| ctx.candidate(i, a, u).map(|r| sign * r);
            let mut best: Option<(usize, f64)> = None;
            for (j, control) in controls.iter().enumerate() {
                if let Some(b) = badness(control) {
                    if best.is_none_or(|(_, bb)| b < bb) {
                        best = Some((j, b));
                    }
                }
            }
            let Some((j, b)) = best else {
                return (None, (u[i] - ctx.u_prev[i]).abs());
            };
            let mut choice = (controls[j].clone(), b);
            if let Some(refiner) = scheme.refiner() {
                let at = |p: f64| set.control_at(&[p]).expect("single-parameter control set");
                let (p, bp) = brent_minimise(refiner, refiner.bracket(j), (refiner.params[j], b), |p| {
                    badness(&at(p)).unwrap_or(f64::INFINITY)
                });
                if bp < b {
                    choice = (at(p), bp);
                }
            }
            if let Some(cur) = current.and_then(|p| p.0[i].as_ref()) {
                if let Some(b) = badness(cur) {
                    if b <= choice.1 + keep_tol {
                        choice = (cur.clone(), b);
                    }
                }
            }
            (Some(choice.0), choice.1.abs())
        })
        .collect();
    let residual = results.iter().fold(0.0f64, |m, r| m.max(r.1));
    (Policy(results.into_iter().map(|r| r.0).collect()), residual)
}

fn assemble_with(ctx: &StepContext<'_>, policy: &Policy) -> Result<SparseSystem> {
    let rows: Vec<(Vec<(usize, f64)>, f64)> = policy
        .0
        .par_iter()
        .enumerate()
        .map(|(i, choice)| match (ctx.scheme.dirichlet_face(i), choice) {
            (None, Some(a)) => {
                let row = ctx.row(i, a);
                let mut entries = Vec::with_capacity(row.terms.len() + 1);
                entries.push((i, row.diagonal));
                entries.extend(row.terms.iter().copied());
                (entries, row.rhs)
            }
            _ => ctx.identity_row(i),
        })
        .collect();
    let (entries, rhs): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(SparseSystem {
        matrix: CsrMatrix::from_rows(entries)?,
        rhs,
    })
}

/// Linear system of step `n` (from `U^{n-1}` to `U^n`) for a fixed policy.
pub fn assemble(scheme: &Scheme, policy: &Policy, u_prev: &GridField, n: usize) -> Result<SparseSystem> {
    if n == 0 || n > scheme.time_grid().steps() {
        return Err(precondition(format!("step index {n} out of range")));
    }
    if policy.0.len() != scheme.grid().node_count() {
        return Err(precondition("policy length differs from node count"));
    }
    let width = scheme.controls()[0].len();
    if policy.0.iter().flatten().any(|a| a.len() != width) {
        return Err(precondition(format!("policy controls must have {width} entries")));
    }
    let ctx = StepContext::new(scheme, u_prev, n);
    assemble_with(&ctx, policy)
}

/// Solves the implicit step `n` by policy iteration.
pub fn howard_solve(scheme: &Scheme, u_prev: &GridField, n: usize) -> Result<HowardOutcome> {
    let settings = scheme.config().howard;
    let ctx = StepContext::new(scheme, u_prev, n);
    let scale = 1.0 + u_prev.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = settings.tolerance_factor * scale;
    let keep_tol = 0.01 * tol;

    let mut u = u_prev.values().to_vec();
    let mut policy: Option<Policy> = None;
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let (next, residual) = improve(&ctx, &u, policy.as_ref(), keep_tol);
        history.push(residual);
        if policy.as_ref() == Some(&next) && residual <= tol {
            return Ok(HowardOutcome {
                field: GridField::from_vec_unchecked(scheme.grid().clone(), u),
                iterations,
                residual,
                history,
                policy: next,
            });
        }
        if iterations == settings.max_iterations {
            return Err(Error::HowardNonConvergence { iterations, history });
        }
        let system = assemble_with(&ctx, &next)?;
        let (solution, _) = system.solve(&u, &settings.linear, Some(0.5 * tol))?;
        if solution.iter().any(|v| !v.is_finite()) {
            return Err(Error::HowardNonConvergence { iterations, history });
        }
        u = solution;
        policy = Some(next);
        iterations += 1;
    }
}
