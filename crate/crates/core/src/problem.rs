//! Problem data for parabolic HJB equations
//!
//! ```text
//! u_t - inf_a { L^a u + c^a u + f^a } = 0,   u(0, x) = g(x),
//! L^a u = 1/2 tr(sigma^a sigma^a^T D^2 u) + b^a . Du
//! ```
//!
//! on an axis-aligned box in one or two space dimensions. The coefficients
//! may carry a nonnegative factor `tau^a` in front of `u_t`, in which case
//! the per-control residuals `R^a = tau^a u_t - L^a u - c^a u - f^a` are
//! combined either by a supremum ([`EquationForm::Standard`], which is the
//! equation above when `tau = 1`) or by an infimum
//! ([`EquationForm::ScaledInf`], the gamma-constrained super-replication
//! form).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{precondition, Error, Result};

/// A point in space. One-dimensional problems only use the first entry and
/// keep the second at zero.
pub type Point = [f64; 2];

/// Largest number of diffusion columns `P` supported.
pub const MAX_COLUMNS: usize = 4;

/// Dense `N x P` diffusion matrix with `N <= 2`, `P <= MAX_COLUMNS`.
#[derive(Clone, Copy, PartialEq)]
pub struct Sigma {
    dim: usize,
    cols: usize,
    // column-major: data[j] is column j
    data: [Point; MAX_COLUMNS],
}

impl Sigma {
    pub fn zeros(dim: usize, cols: usize) -> Self {
        assert!((1..=2).contains(&dim), "dimension must be 1 or 2");
        assert!((1..=MAX_COLUMNS).contains(&cols), "1 <= P <= {MAX_COLUMNS}");
        Sigma {
            dim,
            cols,
            data: [[0.0; 2]; MAX_COLUMNS],
        }
    }

    pub fn from_columns(dim: usize, columns: &[Point]) -> Self {
        let mut s = Sigma::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            s.data[j] = *c;
            if dim == 1 {
                s.data[j][1] = 0.0;
            }
        }
        s
    }

    /// Single-column matrix.
    pub fn column_vector(dim: usize, column: Point) -> Self {
        Sigma::from_columns(dim, &[column])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Point {
        assert!(j < self.cols);
        self.data[j]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.dim && col < self.cols);
        self.data[col][row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!(row < self.dim && col < self.cols);
        self.data[col][row] = value;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data[..self.cols]
            .iter()
            .flat_map(|c| c[..self.dim].iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// `sigma sigma^T` as a 2x2 array (unused entries zero in 1D).
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        let mut a = [[0.0; 2]; 2];
        for c in &self.data[..self.cols] {
            for r in 0..self.dim {
                for s in 0..self.dim {
                    a[r][s] += c[r] * c[s];
                }
            }
        }
        a
    }

    pub fn is_finite(&self) -> bool {
        self.data[..self.cols]
            .iter()
            .all(|c| c.iter().all(|v| v.is_finite()))
    }
}

impl fmt::Debug for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sigma")
            .field("dim", &self.dim)
            .field("columns", &&self.data[..self.cols])
            .finish()
    }
}

/// Coefficient functions of the equation. All methods must be total on the
/// domain times the control set; evaluation must be pure.
pub trait Coefficients: Send + Sync {
    /// Spatial dimension `N` (1 or 2).
    fn dim(&self) -> usize;

    /// Diffusion matrix `sigma^a(t, x)`, `a^a = 1/2 sigma sigma^T`.
    fn sigma(&self, t: f64, x: &Point, control: &[f64]) -> Sigma;

    /// Drift `b^a(t, x)`.
    fn drift(&self, _t: f64, _x: &Point, _control: &[f64]) -> Point {
        [0.0; 2]
    }

    /// Zeroth-order coefficient `c^a(t, x)`.
    fn reaction(&self, _t: f64, _x: &Point, _control: &[f64]) -> f64 {
        0.0
    }

    /// Source term `f^a(t, x)`.
    fn source(&self, _t: f64, _x: &Point, _control: &[f64]) -> f64 {
        0.0
    }

    /// Whether [`Coefficients::source`] ignores the control, so solvers may
    /// evaluate it once per node.
    fn source_ignores_control(&self) -> bool {
        false
    }

    /// Initial data `g(x)`.
    fn initial(&self, x: &Point) -> f64;

    /// Nonnegative factor multiplying `u_t`.
    fn time_coeff(&self, _t: f64, _x: &Point, _control: &[f64]) -> f64 {
        1.0
    }
}

type SigmaFn = dyn Fn(f64, &Point, &[f64]) -> Sigma + Send + Sync;
type VectorFn = dyn Fn(f64, &Point, &[f64]) -> Point + Send + Sync;
type ScalarFn = dyn Fn(f64, &Point, &[f64]) -> f64 + Send + Sync;
type InitialFn = dyn Fn(&Point) -> f64 + Send + Sync;

/// Space-time function `(t, x) -> value`, used for boundary data and exact
/// solutions.
pub type SpaceTimeFn = Arc<dyn Fn(f64, &Point) -> f64 + Send + Sync>;

/// Closure-backed [`Coefficients`] for programmatic problem construction.
pub struct FnCoefficients {
    dim: usize,
    sigma: Box<SigmaFn>,
    drift: Option<Box<VectorFn>>,
    reaction: Option<Box<ScalarFn>>,
    source: Option<Box<ScalarFn>>,
    source_ignores_control: bool,
    time_coeff: Option<Box<ScalarFn>>,
    initial: Box<InitialFn>,
}

impl FnCoefficients {
    pub fn new(
        dim: usize,
        sigma: impl Fn(f64, &Point, &[f64]) -> Sigma + Send + Sync + 'static,
        initial: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        assert!((1..=2).contains(&dim), "dimension must be 1 or 2");
        FnCoefficients {
            dim,
            sigma: Box::new(sigma),
            drift: None,
            reaction: None,
            source: None,
            source_ignores_control: true,
            time_coeff: None,
            initial: Box::new(initial),
        }
    }

    pub fn with_drift(
        mut self,
        f: impl Fn(f64, &Point, &[f64]) -> Point + Send + Sync + 'static,
    ) -> Self {
        self.drift = Some(Box::new(f));
        self
    }

    pub fn with_reaction(
        mut self,
        f: impl Fn(f64, &Point, &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.reaction = Some(Box::new(f));
        self
    }

    pub fn with_source(
        mut self,
        f: impl Fn(f64, &Point, &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.source = Some(Box::new(f));
        self.source_ignores_control = false;
        self
    }

    /// Source term that does not depend on the control.
    pub fn with_uncontrolled_source(mut self, f: impl Fn(f64, &Point) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Box::new(move |t, x, _: &[f64]| f(t, x)));
        self.source_ignores_control = true;
        self
    }

    pub fn with_time_coeff(
        mut self,
        f: impl Fn(f64, &Point, &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.time_coeff = Some(Box::new(f));
        self
    }
}

impl Coefficients for FnCoefficients {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sigma(&self, t: f64, x: &Point, control: &[f64]) -> Sigma {
        (self.sigma)(t, x, control)
    }

    fn drift(&self, t: f64, x: &Point, control: &[f64]) -> Point {
        self.drift.as_ref().map_or([0.0; 2], |f| f(t, x, control))
    }

    fn reaction(&self, t: f64, x: &Point, control: &[f64]) -> f64 {
        self.reaction.as_ref().map_or(0.0, |f| f(t, x, control))
    }

    fn source(&self, t: f64, x: &Point, control: &[f64]) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(t, x, control))
    }

    fn source_ignores_control(&self) -> bool {
        self.source_ignores_control
    }

    fn initial(&self, x: &Point) -> f64 {
        (self.initial)(x)
    }

    fn time_coeff(&self, t: f64, x: &Point, control: &[f64]) -> f64 {
        self.time_coeff.as_ref().map_or(1.0, |f| f(t, x, control))
    }
}

/// One coordinate of a parameterized control set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    /// Periodic ranges are sampled without the right endpoint.
    pub periodic: bool,
}

type ControlMap = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Control set `A`, either a finite list or a compact set given by a map
/// from a box of parameters.
#[derive(Clone)]
pub enum ControlSet {
    Finite(Vec<Vec<f64>>),
    Parameterized {
        name: String,
        params: Vec<ParamRange>,
        map: Arc<ControlMap>,
    },
}

impl fmt::Debug for ControlSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlSet::Finite(points) => f.debug_tuple("Finite").field(points).finish(),
            ControlSet::Parameterized { name, params, .. } => f
                .debug_struct("Parameterized")
                .field("name", name)
                .field("params", params)
                .finish(),
        }
    }
}

/// Point on the unit circle at `turns` full revolutions. Quarter turns are
/// returned exactly so that e.g. `(0, 1)` has a vanishing first entry.
fn circle_point(turns: f64) -> Vec<f64> {
    let quarters = 4.0 * turns;
    if quarters.fract() == 0.0 {
        match (quarters as i64).rem_euclid(4) {
            0 => vec![1.0, 0.0],
            1 => vec![0.0, 1.0],
            2 => vec![-1.0, 0.0],
            _ => vec![0.0, -1.0],
        }
    } else {
        let angle = 2.0 * PI * turns;
        vec![angle.cos(), angle.sin()]
    }
}

impl ControlSet {
    pub fn finite(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(precondition("control set must contain at least one point"));
        }
        Ok(ControlSet::Finite(points))
    }

    pub fn singleton(point: Vec<f64>) -> Self {
        ControlSet::Finite(vec![point])
    }

    /// The unit circle `a_1^2 + a_2^2 = 1`, parameterized by turns in `[0, 1)`.
    pub fn unit_circle() -> Self {
        ControlSet::Parameterized {
            name: "unit-circle".into(),
            params: vec![ParamRange {
                lo: 0.0,
                hi: 1.0,
                periodic: true,
            }],
            map: Arc::new(|p: &[f64]| circle_point(p[0])),
        }
    }

    /// Half of the unit circle, `a_1 >= 0`, parameterized by turns in
    /// `[-1/4, 1/4)` and treated as periodic: the two ends `(0, -1)` and
    /// `(0, 1)` are identified. Equivalent to [`ControlSet::unit_circle`]
    /// for problems whose data are unchanged under `a -> -a`.
    pub fn unit_half_circle() -> Self {
        ControlSet::Parameterized {
            name: "unit-half-circle".into(),
            params: vec![ParamRange {
                lo: -0.25,
                hi: 0.25,
                periodic: true,
            }],
            map: Arc::new(|p: &[f64]| circle_point(p[0])),
        }
    }

    /// Discretizes the set: finite sets are returned unchanged, parameterized
    /// sets are sampled uniformly with `resolution` points per parameter
    /// (first parameter varying fastest).
    pub fn sample(&self, resolution: usize) -> Result<Vec<Vec<f64>>> {
        if resolution == 0 {
            return Err(precondition("control resolution must be at least 1"));
        }
        match self {
            ControlSet::Finite(points) => Ok(points.clone()),
            ControlSet::Parameterized { params, map, .. } => {
                let axes: Vec<Vec<f64>> = params
                    .iter()
                    .map(|r| {
                        (0..resolution)
                            .map(|j| {
                                if r.periodic {
                                    r.lo + (r.hi - r.lo) * (j as f64 / resolution as f64)
                                } else if resolution == 1 {
                                    0.5 * (r.lo + r.hi)
                                } else {
                                    r.lo + (r.hi - r.lo) * (j as f64 / (resolution - 1) as f64)
                                }
                            })
                            .collect()
                    })
                    .collect();
                let total = resolution.pow(params.len() as u32);
                let mut out = Vec::with_capacity(total);
                let mut param = vec![0.0; params.len()];
                for flat in 0..total {
                    let mut rem = flat;
                    for (d, axis) in axes.iter().enumerate() {
                        param[d] = axis[rem % resolution];
                        rem /= resolution;
                    }
                    out.push(map(&param));
                }
                Ok(out)
            }
        }
    }

    /// Parameter range of a single-parameter set, `None` otherwise.
    pub fn single_parameter(&self) -> Option<ParamRange> {
        match self {
            ControlSet::Parameterized { params, .. } if params.len() == 1 => Some(params[0]),
            _ => None,
        }
    }

    /// Control for a parameter vector; `None` for finite sets.
    pub fn control_at(&self, param: &[f64]) -> Option<Vec<f64>> {
        match self {
            ControlSet::Parameterized { map, .. } => Some(map(param)),
            ControlSet::Finite(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ControlSet::Finite(points) => format!("finite({})", points.len()),
            ControlSet::Parameterized { name, .. } => name.clone(),
        }
    }
}

/// Free function form of [`ControlSet::sample`].
pub fn sample_control_set(set: &ControlSet, resolution: usize) -> Result<Vec<Vec<f64>>> {
    set.sample(resolution)
}

/// Axis-aligned box `[lo_0, hi_0] x [lo_1, hi_1]` (only the first axis in 1D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxDomain {
    pub dim: usize,
    pub lo: Point,
    pub hi: Point,
}

impl BoxDomain {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        BoxDomain::new(1, [lo, 0.0], [hi, 0.0])
    }

    pub fn rectangle(lo: Point, hi: Point) -> Result<Self> {
        BoxDomain::new(2, lo, hi)
    }

    fn new(dim: usize, lo: Point, hi: Point) -> Result<Self> {
        for axis in 0..dim {
            if !(hi[axis] - lo[axis] > 0.0) || !lo[axis].is_finite() || !hi[axis].is_finite() {
                return Err(precondition(format!(
                    "domain side {axis} must have positive finite length"
                )));
            }
        }
        Ok(BoxDomain { dim, lo, hi })
    }

    pub fn contains(&self, x: &Point) -> bool {
        (0..self.dim).all(|a| x[a] >= self.lo[a] && x[a] <= self.hi[a])
    }

    pub fn clamp(&self, x: &Point) -> Point {
        let mut y = [0.0; 2];
        for a in 0..self.dim {
            y[a] = x[a].clamp(self.lo[a], self.hi[a]);
        }
        y
    }

    pub fn face_count(&self) -> usize {
        2 * self.dim
    }
}

/// Face of the box: `axis` and whether it is the upper (`hi`) side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub axis: usize,
    pub upper: bool,
}

impl Face {
    pub fn index(&self) -> usize {
        2 * self.axis + usize::from(self.upper)
    }

    pub fn from_index(index: usize) -> Self {
        Face {
            axis: index / 2,
            upper: index % 2 == 1,
        }
    }
}

#[derive(Clone)]
pub enum BoundaryCondition {
    /// Prescribed values `(t, x) -> u` on the face. A displaced point beyond
    /// the face is clamped onto it and the data are evaluated there.
    Dirichlet(SpaceTimeFn),
    /// Prescribed values from a function that is also valid outside the box
    /// (typically a known solution). Displaced points beyond the face are
    /// evaluated where they are, without clamping, which keeps the operator
    /// consistent up to the boundary.
    ExtendedDirichlet(SpaceTimeFn),
    HomogeneousNeumann,
}

impl BoundaryCondition {
    pub fn dirichlet(f: impl Fn(f64, &Point) -> f64 + Send + Sync + 'static) -> Self {
        BoundaryCondition::Dirichlet(Arc::new(f))
    }

    pub fn extended_dirichlet(f: impl Fn(f64, &Point) -> f64 + Send + Sync + 'static) -> Self {
        BoundaryCondition::ExtendedDirichlet(Arc::new(f))
    }

    pub fn is_dirichlet(&self) -> bool {
        self.data().is_some()
    }

    /// The Dirichlet data, if any.
    pub fn data(&self) -> Option<&SpaceTimeFn> {
        match self {
            BoundaryCondition::Dirichlet(g) | BoundaryCondition::ExtendedDirichlet(g) => Some(g),
            BoundaryCondition::HomogeneousNeumann => None,
        }
    }
}

impl fmt::Debug for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Dirichlet(_) => write!(f, "Dirichlet"),
            BoundaryCondition::ExtendedDirichlet(_) => write!(f, "ExtendedDirichlet"),
            BoundaryCondition::HomogeneousNeumann => write!(f, "HomogeneousNeumann"),
        }
    }
}

/// How per-control residuals `R^a = tau^a u_t - L^a u - c^a u - f^a` combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationForm {
    /// `sup_a R^a = 0`; with `tau = 1` this is `u_t = inf_a {L^a u + c^a u + f^a}`.
    Standard,
    /// `inf_a R^a = 0`.
    ScaledInf,
}

/// Coefficient values at one `(t, x, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValues {
    pub sigma: Sigma,
    pub drift: Point,
    pub reaction: f64,
    pub source: f64,
    pub time_coeff: f64,
}

/// A complete initial-boundary value problem.
#[derive(Clone)]
pub struct HjbProblem {
    pub name: String,
    pub coefficients: Arc<dyn Coefficients>,
    pub control_set: ControlSet,
    pub domain: BoxDomain,
    pub horizon: f64,
    /// One condition per face, indexed by [`Face::index`].
    pub boundary: Vec<BoundaryCondition>,
    pub exact_solution: Option<SpaceTimeFn>,
    pub form: EquationForm,
}

impl fmt::Debug for HjbProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HjbProblem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("horizon", &self.horizon)
            .field("control_set", &self.control_set)
            .field("boundary", &self.boundary)
            .field("form", &self.form)
            .field("exact_solution", &self.exact_solution.is_some())
            .finish()
    }
}

impl HjbProblem {
    pub fn new(
        name: impl Into<String>,
        coefficients: Arc<dyn Coefficients>,
        control_set: ControlSet,
        domain: BoxDomain,
        horizon: f64,
        boundary: Vec<BoundaryCondition>,
    ) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(precondition("horizon T must be positive and finite"));
        }
        if coefficients.dim() != domain.dim {
            return Err(precondition(format!(
                "coefficients are {}-dimensional but the domain is {}-dimensional",
                coefficients.dim(),
                domain.dim
            )));
        }
        if boundary.len() != domain.face_count() {
            return Err(precondition(format!(
                "expected {} boundary conditions (one per face), got {}",
                domain.face_count(),
                boundary.len()
            )));
        }
        if let ControlSet::Finite(points) = &control_set {
            if points.is_empty() {
                return Err(precondition("control set must contain at least one point"));
            }
        }
        Ok(HjbProblem {
            name: name.into(),
            coefficients,
            control_set,
            domain,
            horizon,
            boundary,
            exact_solution: None,
            form: EquationForm::Standard,
        })
    }

    pub fn with_exact(mut self, f: impl Fn(f64, &Point) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_solution = Some(Arc::new(f));
        self
    }

    pub fn with_form(mut self, form: EquationForm) -> Self {
        self.form = form;
        self
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    pub fn boundary_at(&self, face: Face) -> &BoundaryCondition {
        &self.boundary[face.index()]
    }

    pub fn evaluate_coefficients(
        &self,
        t: f64,
        x: &Point,
        control: &[f64],
    ) -> Result<CoefficientValues> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(precondition(format!(
                "time {t} outside [0, {}]",
                self.horizon
            )));
        }
        if !self.domain.contains(x) {
            return Err(precondition(format!("point {x:?} outside the domain")));
        }
        Ok(self.coefficients_unchecked(t, x, control))
    }

    pub(crate) fn coefficients_unchecked(
        &self,
        t: f64,
        x: &Point,
        control: &[f64],
    ) -> CoefficientValues {
        let c = &self.coefficients;
        CoefficientValues {
            sigma: c.sigma(t, x, control),
            drift: c.drift(t, x, control),
            reaction: c.reaction(t, x, control),
            source: c.source(t, x, control),
            time_coeff: c.time_coeff(t, x, control),
        }
    }

    /// Like `coefficients_unchecked` but with the source left at zero.
    pub(crate) fn coefficients_without_source(&self, t: f64, x: &Point, control: &[f64]) -> CoefficientValues {
        let c = &self.coefficients;
        CoefficientValues {
            sigma: c.sigma(t, x, control),
            drift: c.drift(t, x, control),
            reaction: c.reaction(t, x, control),
            source: 0.0,
            time_coeff: c.time_coeff(t, x, control),
        }
    }

    pub fn evaluate_exact(&self, t: f64, x: &Point) -> Result<f64> {
        match &self.exact_solution {
            Some(u) => Ok(u(t, x)),
            None => Err(Error::Unsupported(format!(
                "problem `{}` has no exact solution",
                self.name
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_quarter_turns_are_exact() {
        let pts = ControlSet::unit_circle().sample(4).unwrap();
        assert_eq!(
            pts,
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0]
            ]
        );
    }

    #[test]
    fn half_circle_samples_have_nonnegative_first_entry() {
        let pts = ControlSet::unit_half_circle().sample(4).unwrap();
        assert_eq!(pts[0], vec![0.0, -1.0]);
        assert_eq!(pts[2], vec![1.0, 0.0]);
        assert!(pts.iter().all(|a| a[0] >= 0.0 && (a[0].hypot(a[1]) - 1.0).abs() < 1e-15));
    }

    #[test]
    fn circle_eighth_turn() {
        let pts = ControlSet::unit_circle().sample(8).unwrap();
        let h = 0.5f64.sqrt();
        assert!((pts[1][0] - h).abs() < 1e-15 && (pts[1][1] - h).abs() < 1e-15);
    }

    #[test]
    fn circle_samples_lie_on_circle_and_are_deterministic() {
        let cs = ControlSet::unit_circle();
        let a = cs.sample(97).unwrap();
        let b = cs.sample(97).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert!((p[0] * p[0] + p[1] * p[1] - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn finite_set_unchanged() {
        let cs = ControlSet::finite(vec![vec![0.3, -2.0]]).unwrap();
        assert_eq!(cs.sample(17).unwrap(), vec![vec![0.3, -2.0]]);
        assert!(ControlSet::finite(vec![]).is_err());
        assert!(cs.sample(0).is_err());
    }

    #[test]
    fn closed_parameter_range_includes_endpoints() {
        let cs = ControlSet::Parameterized {
            name: "square".into(),
            params: vec![
                ParamRange { lo: -1.0, hi: 1.0, periodic: false },
                ParamRange { lo: 0.0, hi: 2.0, periodic: false },
            ],
            map: Arc::new(|p: &[f64]| p.to_vec()),
        };
        let pts = cs.sample(3).unwrap();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![-1.0, 0.0]);
        assert_eq!(pts[1], vec![0.0, 0.0]);
        assert_eq!(pts[8], vec![1.0, 2.0]);
    }

    #[test]
    fn problem_validation() {
        let coeffs: Arc<dyn Coefficients> =
            Arc::new(FnCoefficients::new(1, |_, _, _| Sigma::zeros(1, 1), |_| 0.0));
        let d = BoxDomain::interval(0.0, 1.0).unwrap();
        let bc = vec![BoundaryCondition::HomogeneousNeumann; 2];
        let cs = ControlSet::singleton(vec![0.0]);
        assert!(HjbProblem::new("p", coeffs.clone(), cs.clone(), d, 0.0, bc.clone()).is_err());
        assert!(HjbProblem::new("p", coeffs.clone(), cs.clone(), d, 1.0, bc[..1].to_vec()).is_err());
        let p = HjbProblem::new("p", coeffs, cs, d, 1.0, bc).unwrap();
        assert!(p.evaluate_coefficients(0.5, &[2.0, 0.0], &[0.0]).is_err());
        assert!(p.evaluate_coefficients(1.5, &[0.5, 0.0], &[0.0]).is_err());
        assert!(matches!(p.evaluate_exact(0.0, &[0.0, 0.0]), Err(Error::Unsupported(_))));
        assert!(BoxDomain::interval(1.0, 1.0).is_err());
    }
}
