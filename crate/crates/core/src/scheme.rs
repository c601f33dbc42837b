//! The theta-scheme
//!
//! ```text
//! tau (U^n_i - U^{n-1}_i) / dt  "opt_a"  { L^a_k[I Ubar]_i + c^a Ubar_i + f^a }
//! Ubar = (1 - theta) U^{n-1} + theta U^n
//! ```
//!
//! with coefficients evaluated at `t_{n-1} + theta dt`. `theta = 0` is
//! explicit and handled in closed form; `theta > 0` goes through Howard's
//! policy iteration ([`crate::howard`]).
//!
//! Displaced points `x_i + y` that leave the box are treated per face: a
//! coordinate leaving through a homogeneous Neumann face is clamped back to
//! it, and a point leaving through a Dirichlet face takes the Dirichlet data
//! at the (Neumann-clamped) displaced point itself.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{precondition, CflBinding, Error, Result};
use crate::grid::{GridField, SpatialGrid, TimeGrid};
use crate::howard::{howard_solve, HowardSettings};
use crate::interp::{weights_unchecked, InterpolationWeights};
use crate::problem::{BoundaryCondition, CoefficientValues, EquationForm, Face, HjbProblem, ParamRange, Point};
use crate::stencil::{build_unchecked, DisplacementSet, StencilVariant};

/// Numerical parameters of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub theta: f64,
    pub k: f64,
    pub dx: f64,
    /// Number of uniform time steps `N_T`; `dt = T / N_T`.
    pub time_steps: usize,
    pub variant: StencilVariant,
    /// Samples per control parameter.
    pub control_resolution: usize,
    pub howard: HowardSettings,
}

impl SchemeConfig {
    pub fn new(theta: f64, k: f64, dx: f64, time_steps: usize, variant: StencilVariant) -> Self {
        SchemeConfig {
            theta,
            k,
            dx,
            time_steps,
            variant,
            control_resolution: 64,
            howard: HowardSettings::default(),
        }
    }

    pub fn with_controls(mut self, resolution: usize) -> Self {
        self.control_resolution = resolution;
        self
    }

    pub fn dt(&self, horizon: f64) -> f64 {
        if self.time_steps == 0 {
            0.0
        } else {
            horizon / self.time_steps as f64
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(precondition(format!("theta = {} not in [0, 1]", self.theta)));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(precondition("k must be positive"));
        }
        if !(self.dx > 0.0) || !self.dx.is_finite() {
            return Err(precondition("dx must be positive"));
        }
        if self.control_resolution == 0 {
            return Err(precondition("control resolution must be at least 1"));
        }
        Ok(())
    }
}

/// Value of `I U` at a displaced point: either interpolation weights or a
/// known Dirichlet value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisplacedSample {
    Weights(InterpolationWeights),
    Value(f64),
}

/// Resolves a displaced point against the boundary conditions at time
/// `data_time`.
pub fn sample_displaced(
    grid: &SpatialGrid,
    boundary: &[BoundaryCondition],
    point: &Point,
    data_time: f64,
) -> DisplacedSample {
    let domain = grid.domain();
    let mut q = *point;
    let mut dirichlet: Option<&BoundaryCondition> = None;
    for axis in 0..domain.dim {
        let face = if q[axis] < domain.lo[axis] {
            Face { axis, upper: false }
        } else if q[axis] > domain.hi[axis] {
            Face { axis, upper: true }
        } else {
            continue;
        };
        match &boundary[face.index()] {
            BoundaryCondition::HomogeneousNeumann => {
                q[axis] = if face.upper { domain.hi[axis] } else { domain.lo[axis] };
            }
            bc @ BoundaryCondition::Dirichlet(_) => {
                q[axis] = if face.upper { domain.hi[axis] } else { domain.lo[axis] };
                dirichlet.get_or_insert(bc);
            }
            bc @ BoundaryCondition::ExtendedDirichlet(_) => {
                dirichlet.get_or_insert(bc);
            }
        }
    }
    match dirichlet {
        Some(BoundaryCondition::ExtendedDirichlet(g)) => DisplacedSample::Value(g(data_time, point)),
        Some(BoundaryCondition::Dirichlet(g)) => DisplacedSample::Value(g(data_time, &q)),
        _ => DisplacedSample::Weights(weights_unchecked(grid, &q)),
    }
}

/// `L_k` at one node and control, written as an affine function of the node
/// values: `center * U_node + sum_j w_j U_j + constant`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LocalOperator {
    pub node: usize,
    pub center: f64,
    pub terms: SmallVec<[(usize, f64); 12]>,
    pub constant: f64,
}

impl LocalOperator {
    pub fn build(
        grid: &SpatialGrid,
        boundary: &[BoundaryCondition],
        node: usize,
        ds: &DisplacementSet,
        data_time: f64,
    ) -> Self {
        let x = grid.node(node);
        let inv = 1.0 / (2.0 * ds.k() * ds.k());
        let mut terms = SmallVec::new();
        let mut constant = 0.0;
        for (plus, minus) in ds.pairs() {
            for y in [plus, minus] {
                let p = [x[0] + y[0], x[1] + y[1]];
                match sample_displaced(grid, boundary, &p, data_time) {
                    DisplacedSample::Weights(w) => {
                        terms.extend(w.iter().map(|&(j, wj)| (j, wj * inv)));
                    }
                    DisplacedSample::Value(v) => constant += v * inv,
                }
            }
        }
        LocalOperator {
            node,
            center: -2.0 * ds.m() as f64 * inv,
            terms,
            constant,
        }
    }

    /// Applies the operator to `values` without collecting its terms.
    /// Returns `(center, self_weight, others, constant)`, where
    /// `self_weight` is the total weight landing back on `node` and
    /// `others` is the weighted sum over all other nodes.
    pub fn evaluate(
        grid: &SpatialGrid,
        boundary: &[BoundaryCondition],
        node: usize,
        ds: &DisplacementSet,
        data_time: f64,
        values: &[f64],
    ) -> (f64, f64, f64, f64) {
        let x = grid.node(node);
        let inv = 1.0 / (2.0 * ds.k() * ds.k());
        let (mut self_weight, mut others, mut constant) = (0.0, 0.0, 0.0);
        for (plus, minus) in ds.pairs() {
            for y in [plus, minus] {
                let p = [x[0] + y[0], x[1] + y[1]];
                match sample_displaced(grid, boundary, &p, data_time) {
                    DisplacedSample::Weights(w) => {
                        for &(j, wj) in w.iter() {
                            if j == node {
                                self_weight += wj * inv;
                            } else {
                                others += wj * inv * values[j];
                            }
                        }
                    }
                    DisplacedSample::Value(v) => constant += v * inv,
                }
            }
        }
        (-2.0 * ds.m() as f64 * inv, self_weight, others, constant)
    }

    /// Sum of the nonnegative neighbour terms, `sum_j w_j U_j`.
    pub fn neighbour_sum(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, w)| w * values[j]).sum()
    }

    pub fn apply(&self, values: &[f64]) -> f64 {
        self.center * values[self.node] + self.neighbour_sum(values) + self.constant
    }
}

/// `L_k[I U](x)` for a grid node `x`, with displaced points resolved
/// against `boundary` at time `t`.
pub fn apply_lk(
    field: &GridField,
    ds: &DisplacementSet,
    x: &Point,
    boundary: &[BoundaryCondition],
    t: f64,
) -> Result<f64> {
    let grid = field.grid();
    let node = node_index(grid, x)
        .ok_or_else(|| precondition(format!("{x:?} is not a grid node")))?;
    if boundary.len() != grid.domain().face_count() {
        return Err(precondition("one boundary condition per face required"));
    }
    Ok(LocalOperator::build(grid, boundary, node, ds, t).apply(field.values()))
}

fn node_index(grid: &SpatialGrid, x: &Point) -> Option<usize> {
    if !grid.domain().contains(x) {
        return None;
    }
    let mut c = [0usize; 2];
    for (axis, slot) in c.iter_mut().enumerate().take(grid.dim()) {
        let s = (x[axis] - grid.domain().lo[axis]) / grid.spacing();
        let r = s.round();
        if (s - r).abs() > 1e-9 {
            return None;
        }
        *slot = r as usize;
    }
    let idx = grid.index(c);
    (grid.node(idx) == *x || {
        let n = grid.node(idx);
        (0..grid.dim()).all(|a| (n[a] - x[a]).abs() <= 1e-12 * (1.0 + x[a].abs()))
    })
    .then_some(idx)
}

/// Outcome of the time-step restriction check.
#[derive(Debug, Clone, PartialEq)]
pub struct CflReport {
    /// Largest admissible `dt`; `None` when both conditions are vacuous.
    pub max_allowed_dt: Option<f64>,
    pub pass: bool,
    /// Condition attaining `max_allowed_dt`.
    pub binding: Option<CflBinding>,
    /// Admissible `dt` per time level `n = 1..=N_T`.
    pub per_level: Vec<Option<f64>>,
    /// Largest `dt` with `2 theta dt c+ <= tau` (unique solvability).
    pub solvability_max_dt: Option<f64>,
    pub sup_c_plus: f64,
}

impl CflReport {
    pub fn margin(&self, dt: f64) -> f64 {
        match self.max_allowed_dt {
            Some(m) => m / dt,
            None => f64::INFINITY,
        }
    }
}

fn min_opt(a: Option<f64>, b: f64) -> Option<f64> {
    Some(a.map_or(b, |v| v.min(b)))
}

/// Checks `(1-theta) dt [M/k^2 - c] <= tau` and `theta dt c <= tau` over all
/// nodes, sampled controls and time levels `t_{n-1} + theta dt`.
pub fn check_cfl(problem: &HjbProblem, config: &SchemeConfig) -> Result<CflReport> {
    config.validate()?;
    let grid = SpatialGrid::new(problem.domain, config.dx)?;
    let controls = problem.control_set.sample(config.control_resolution)?;
    let time = TimeGrid::new(problem.horizon, config.time_steps)?;
    Ok(cfl_report(problem, config, &grid, &controls, &time))
}

fn cfl_report(
    problem: &HjbProblem,
    config: &SchemeConfig,
    grid: &SpatialGrid,
    controls: &[Vec<f64>],
    time: &TimeGrid,
) -> CflReport {
    let theta = config.theta;
    let dt = time.dt();
    let k2 = config.k * config.k;
    let coeffs = &problem.coefficients;

    let mut max_dt: Option<f64> = None;
    let mut binding = None;
    let mut pass = true;
    let mut per_level = Vec::with_capacity(time.steps());
    let mut solvability: Option<f64> = None;
    let mut sup_c_plus: f64 = 0.0;

    for n in 1..=time.steps() {
        let t = time.time(n - 1) + theta * dt;
        // (explicit bound, implicit bound, solvability bound, pass, c+)
        let level = (0..grid.node_count())
            .into_par_iter()
            .map(|i| {
                let x = grid.node(i);
                let mut acc = (None::<f64>, None::<f64>, None::<f64>, true, 0.0f64);
                for a in controls {
                    let tau = coeffs.time_coeff(t, &x, a);
                    let c = coeffs.reaction(t, &x, a);
                    let m = config.variant.pair_count(coeffs.sigma(t, &x, a).cols()) as f64;
                    let explicit = (1.0 - theta) * (m / k2 - c);
                    let implicit = theta * c;
                    if explicit * dt > tau || implicit * dt > tau {
                        acc.3 = false;
                    }
                    if explicit > 0.0 {
                        acc.0 = min_opt(acc.0, tau / explicit);
                    }
                    if implicit > 0.0 {
                        acc.1 = min_opt(acc.1, tau / implicit);
                        acc.2 = min_opt(acc.2, tau / (2.0 * implicit));
                    }
                    acc.4 = acc.4.max(c.max(0.0));
                }
                acc
            })
            .reduce(
                || (None, None, None, true, 0.0),
                |a, b| {
                    let m = |x: Option<f64>, y: Option<f64>| match (x, y) {
                        (Some(p), Some(q)) => Some(p.min(q)),
                        (p, q) => p.or(q),
                    };
                    (m(a.0, b.0), m(a.1, b.1), m(a.2, b.2), a.3 && b.3, a.4.max(b.4))
                },
            );
        pass &= level.3;
        sup_c_plus = sup_c_plus.max(level.4);
        if let Some(s) = level.2 {
            solvability = min_opt(solvability, s);
        }
        let level_max = match (level.0, level.1) {
            (Some(e), Some(i)) => Some(e.min(i)),
            (e, i) => e.or(i),
        };
        per_level.push(level_max);
        for (bound, which) in [(level.0, CflBinding::Explicit), (level.1, CflBinding::Implicit)] {
            if let Some(b) = bound {
                if max_dt.is_none_or(|m| b < m) {
                    max_dt = Some(b);
                    binding = Some(which);
                }
            }
        }
    }
    CflReport {
        max_allowed_dt: max_dt,
        pass,
        binding,
        per_level,
        solvability_max_dt: solvability,
        sup_c_plus,
    }
}

/// Per-step record of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub n: usize,
    pub t: f64,
    pub howard_iterations: usize,
    /// Final nodal residual of the step equation (zero for explicit steps).
    pub residual: f64,
    /// Admissible over configured `dt` at this level (`inf` if unbounded).
    pub cfl_margin: f64,
    /// Residual before each Howard solve.
    pub residual_history: Vec<f64>,
}

pub fn write_diagnostics_csv<W: Write>(steps: &[StepDiagnostics], mut out: W) -> std::io::Result<()> {
    writeln!(out, "n,t,howard_iters,residual,cfl_margin")?;
    for s in steps {
        writeln!(
            out,
            "{},{:.16e},{},{:.16e},{:.16e}",
            s.n, s.t, s.howard_iterations, s.residual, s.cfl_margin
        )?;
    }
    Ok(())
}

pub fn write_howard_trace_csv<W: Write>(steps: &[StepDiagnostics], mut out: W) -> std::io::Result<()> {
    writeln!(out, "n,iteration,residual")?;
    for s in steps {
        for (it, r) in s.residual_history.iter().enumerate() {
            writeln!(out, "{},{},{:.16e}", s.n, it, r)?;
        }
    }
    Ok(())
}

/// Result of [`Scheme::solve`].
#[derive(Debug, Clone)]
pub struct Solution {
    pub final_field: GridField,
    pub final_time: f64,
    /// All levels `U^0..U^{N_T}` when history was requested.
    pub history: Vec<GridField>,
    pub diagnostics: Vec<StepDiagnostics>,
}

/// A problem bound to a discretization, ready to step.
pub struct Scheme {
    problem: HjbProblem,
    config: SchemeConfig,
    grid: Arc<SpatialGrid>,
    time: TimeGrid,
    controls: Vec<Vec<f64>>,
    /// Dirichlet face for boundary nodes, `None` for unknowns.
    dirichlet: Vec<Option<usize>>,
    cfl: CflReport,
    refiner: Option<ControlRefiner>,
}

/// Local continuous search around sampled controls of a single-parameter
/// control set, used by policy improvement.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ControlRefiner {
    pub range: ParamRange,
    /// Parameter spacing of the samples.
    pub step: f64,
    /// Parameter of each sampled control.
    pub params: Vec<f64>,
    pub iterations: usize,
}

impl ControlRefiner {
    fn new(range: ParamRange, resolution: usize, iterations: usize) -> Self {
        let width = range.hi - range.lo;
        let (step, params) = if range.periodic {
            let step = width / resolution as f64;
            (step, (0..resolution).map(|j| range.lo + width * (j as f64 / resolution as f64)).collect())
        } else if resolution == 1 {
            (width, vec![0.5 * (range.lo + range.hi)])
        } else {
            let n = (resolution - 1) as f64;
            (width / n, (0..resolution).map(|j| range.lo + width * (j as f64 / n)).collect())
        };
        ControlRefiner {
            range,
            step,
            params,
            iterations,
        }
    }

    /// Search bracket around sample `j`.
    pub fn bracket(&self, j: usize) -> (f64, f64) {
        self.bracket_around(self.params[j])
    }

    /// Search bracket of one sample spacing on each side of `p`.
    pub fn bracket_around(&self, p: f64) -> (f64, f64) {
        if self.range.periodic {
            (p - self.step, p + self.step)
        } else {
            ((p - self.step).max(self.range.lo), (p + self.step).min(self.range.hi))
        }
    }

    /// Parameter folded back into the range.
    pub fn wrap(&self, p: f64) -> f64 {
        if self.range.periodic {
            let w = self.range.hi - self.range.lo;
            self.range.lo + (p - self.range.lo).rem_euclid(w)
        } else {
            p
        }
    }
}

impl Scheme {
    /// Validates the configuration. Refuses runs violating the CFL
    /// conditions or the unique-solvability bound.
    pub fn new(problem: HjbProblem, config: SchemeConfig) -> Result<Self> {
        config.validate()?;
        let grid = Arc::new(SpatialGrid::new(problem.domain, config.dx)?);
        let controls = problem.control_set.sample(config.control_resolution)?;
        let time = TimeGrid::new(problem.horizon, config.time_steps)?;
        let cfl = cfl_report(&problem, &config, &grid, &controls, &time);
        let dt = time.dt();
        if !cfl.pass {
            return Err(Error::Cfl {
                binding: cfl.binding.unwrap_or(CflBinding::Explicit),
                dt,
                max_dt: cfl.max_allowed_dt.unwrap_or(0.0),
            });
        }
        if let Some(s) = cfl.solvability_max_dt {
            if dt > s {
                return Err(Error::Solvability {
                    dt,
                    c_plus: cfl.sup_c_plus,
                });
            }
        }
        let dirichlet = (0..grid.node_count())
            .map(|i| {
                grid.node_faces(i)
                    .find(|f| problem.boundary[f.index()].is_dirichlet())
                    .map(|f| f.index())
            })
            .collect();
        let refiner = match (config.howard.control_refinement, problem.control_set.single_parameter()) {
            (0, _) | (_, None) => None,
            (iterations, Some(range)) => Some(ControlRefiner::new(range, config.control_resolution, iterations)),
        };
        Ok(Scheme {
            problem,
            config,
            grid,
            time,
            controls,
            dirichlet,
            cfl,
            refiner,
        })
    }

    pub fn problem(&self) -> &HjbProblem {
        &self.problem
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time
    }

    pub fn controls(&self) -> &[Vec<f64>] {
        &self.controls
    }

    pub fn cfl(&self) -> &CflReport {
        &self.cfl
    }

    pub fn dt(&self) -> f64 {
        self.time.dt()
    }

    pub(crate) fn refiner(&self) -> Option<&ControlRefiner> {
        self.refiner.as_ref()
    }

    pub(crate) fn dirichlet_face(&self, node: usize) -> Option<usize> {
        self.dirichlet[node]
    }

    pub(crate) fn dirichlet_value(&self, face: usize, t: f64, node: usize) -> f64 {
        let g = self.problem.boundary[face].data().expect("a Dirichlet face");
        g(t, &self.grid.node(node))
    }

    /// Time at which coefficients of step `n` are evaluated.
    pub fn coefficient_time(&self, n: usize) -> f64 {
        self.time.time(n - 1) + self.config.theta * self.dt()
    }

    pub(crate) fn coefficients(&self, t: f64, node: usize, control: usize) -> CoefficientValues {
        self.coefficients_for(t, node, &self.controls[control])
    }

    pub(crate) fn coefficients_for(&self, t: f64, node: usize, control: &[f64]) -> CoefficientValues {
        self.problem.coefficients_unchecked(t, &self.grid.node(node), control)
    }

    /// Allocation-free application of the local operator; see
    /// [`LocalOperator::evaluate`].
    pub(crate) fn evaluate_operator(
        &self,
        node: usize,
        coeffs: &CoefficientValues,
        data_time: f64,
        values: &[f64],
    ) -> (f64, f64, f64, f64) {
        let ds = build_unchecked(self.config.variant, &coeffs.sigma, &coeffs.drift, self.config.k);
        LocalOperator::evaluate(&self.grid, &self.problem.boundary, node, &ds, data_time, values)
    }

    /// Source at every node if it does not depend on the control.
    pub(crate) fn uncontrolled_sources(&self, t: f64) -> Option<Vec<f64>> {
        self.problem.coefficients.source_ignores_control().then(|| {
            (0..self.grid.node_count())
                .map(|i| self.problem.coefficients.source(t, &self.grid.node(i), &self.controls[0]))
                .collect()
        })
    }

    pub(crate) fn coefficients_without_source(&self, t: f64, node: usize, control: &[f64]) -> CoefficientValues {
        self.problem.coefficients_without_source(t, &self.grid.node(node), control)
    }

    pub(crate) fn local_operator(
        &self,
        node: usize,
        coeffs: &CoefficientValues,
        data_time: f64,
    ) -> LocalOperator {
        let ds = build_unchecked(self.config.variant, &coeffs.sigma, &coeffs.drift, self.config.k);
        LocalOperator::build(&self.grid, &self.problem.boundary, node, &ds, data_time)
    }

    /// Largest displacement length over `dx` at `t`, over all nodes and
    /// sampled controls.
    pub fn stencil_width(&self, t: f64) -> f64 {
        let mut width: f64 = 0.0;
        for i in 0..self.grid.node_count() {
            for a in 0..self.controls.len() {
                let c = self.coefficients(t, i, a);
                let ds = build_unchecked(self.config.variant, &c.sigma, &c.drift, self.config.k);
                width = width.max(ds.max_length());
            }
        }
        width / self.grid.spacing()
    }

    pub fn initial_field(&self) -> GridField {
        let g = &self.problem.coefficients;
        GridField::from_fn(self.grid.clone(), |x| g.initial(x))
    }

    /// One explicit Euler step from level `n - 1` to `n`.
    pub fn step_explicit(&self, u_prev: &GridField, n: usize) -> Result<GridField> {
        self.check_step(u_prev, n)?;
        if !self.cfl.pass {
            return Err(Error::Cfl {
                binding: self.cfl.binding.unwrap_or(CflBinding::Explicit),
                dt: self.dt(),
                max_dt: self.cfl.max_allowed_dt.unwrap_or(0.0),
            });
        }
        let t_prev = self.time.time(n - 1);
        let t_next = self.time.time(n);
        let t_coef = self.coefficient_time(n);
        let dt = self.dt();
        let values = u_prev.values();
        let minimize = self.problem.form == EquationForm::Standard;
        let out: Vec<f64> = (0..self.grid.node_count())
            .into_par_iter()
            .map(|i| {
                if let Some(face) = self.dirichlet[i] {
                    return self.dirichlet_value(face, t_next, i);
                }
                let mut best: Option<f64> = None;
                for a in 0..self.controls.len() {
                    let c = self.coefficients(t_coef, i, a);
                    let op = self.local_operator(i, &c, t_prev);
                    // tau > 0 is implied by the CFL check
                    let ratio = dt / c.time_coeff;
                    let a0 = 1.0 + ratio * (op.center + c.reaction);
                    let v = a0 * values[i]
                        + ratio * op.neighbour_sum(values)
                        + ratio * (op.constant + c.source);
                    best = Some(match best {
                        None => v,
                        Some(b) if minimize => if v < b { v } else { b },
                        Some(b) => if v > b { v } else { b },
                    });
                }
                best.expect("at least one control")
            })
            .collect();
        GridField::new(self.grid.clone(), out)
    }

    /// One theta-step from level `n - 1` to `n`, with the Howard outcome for
    /// `theta > 0`.
    pub fn step_theta(&self, u_prev: &GridField, n: usize) -> Result<(GridField, StepDiagnostics)> {
        self.check_step(u_prev, n)?;
        let margin = self.cfl.per_level[n - 1].map_or(f64::INFINITY, |m| m / self.dt());
        if self.config.theta == 0.0 {
            let u = self.step_explicit(u_prev, n)?;
            return Ok((
                u,
                StepDiagnostics {
                    n,
                    t: self.time.time(n),
                    howard_iterations: 0,
                    residual: 0.0,
                    cfl_margin: margin,
                    residual_history: Vec::new(),
                },
            ));
        }
        let outcome = howard_solve(self, u_prev, n)?;
        Ok((
            outcome.field,
            StepDiagnostics {
                n,
                t: self.time.time(n),
                howard_iterations: outcome.iterations,
                residual: outcome.residual,
                cfl_margin: margin,
                residual_history: outcome.history,
            },
        ))
    }

    fn check_step(&self, u_prev: &GridField, n: usize) -> Result<()> {
        if n == 0 || n > self.time.steps() {
            return Err(precondition(format!(
                "step index {n} outside 1..={}",
                self.time.steps()
            )));
        }
        if u_prev.grid().as_ref() != self.grid.as_ref() {
            return Err(precondition("field lives on a different grid"));
        }
        Ok(())
    }

    /// Runs from `U^0 = g` to `t = T`.
    pub fn solve(&self, keep_history: bool) -> Result<Solution> {
        let mut u = self.initial_field();
        let mut history = Vec::new();
        if keep_history {
            history.push(u.clone());
        }
        let mut diagnostics = Vec::with_capacity(self.time.steps());
        for n in 1..=self.time.steps() {
            let (next, diag) = self.step_theta(&u, n)?;
            u = next;
            if keep_history {
                history.push(u.clone());
            }
            diagnostics.push(diag);
        }
        Ok(Solution {
            final_field: u,
            final_time: self.time.time(self.time.steps()),
            history,
            diagnostics,
        })
    }
}

/// Builds the scheme and runs it to the horizon.
pub fn solve(problem: &HjbProblem, config: &SchemeConfig) -> Result<Solution> {
    Scheme::new(problem.clone(), config.clone())?.solve(false)
}
