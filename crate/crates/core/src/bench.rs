//! Built-in benchmark problems, looked up by name from the CLI.
//!
//! * `convergence-superrep`: the gamma-constrained super-replication
//!   operator on `[0,3]^2` with a manufactured exact solution
//!   `u = 1 + t^2 - exp(-|x|^2)`.
//! * `pricing-superrep`: the same operator with `f = 0` and put-payoff data.
//! * `smooth-1d`: a linear 1D advection-diffusion-reaction problem with exact
//!   solution `exp(-t) sin(x)`.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{
    BoundaryCondition, BoxDomain, ControlSet, EquationForm, FnCoefficients, HjbProblem, Point, Sigma,
};
use crate::scheme::SchemeConfig;
use crate::stencil::StencilVariant;

/// Published reference values for a benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub dx: f64,
    pub sup_error: f64,
    pub rate: Option<f64>,
}

/// Prescribed discretization: `k = sqrt(dx)`, `N_T = round(T / dx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterMap {
    pub theta: f64,
    pub variant: StencilVariant,
    pub control_resolution: usize,
    /// Evaluation budget refining sampled controls in Howard's method.
    pub control_refinement: usize,
    /// Coarsest level of a convergence study.
    pub base_dx: f64,
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub name: &'static str,
    pub problem: HjbProblem,
    pub reference: Vec<ReferenceRow>,
    pub parameters: ParameterMap,
}

impl BenchmarkSpec {
    /// Scheme configuration at mesh size `dx` per the parameter map.
    pub fn config(&self, dx: f64) -> SchemeConfig {
        let p = &self.parameters;
        let mut cfg = SchemeConfig::new(p.theta, dx.sqrt(), dx, time_steps(self.problem.horizon, dx), p.variant)
            .with_controls(p.control_resolution);
        cfg.howard.control_refinement = p.control_refinement;
        cfg
    }

    /// `count` levels halving from the base mesh size.
    pub fn levels(&self, count: usize) -> Vec<f64> {
        halving_levels(self.parameters.base_dx, count)
    }
}

pub fn time_steps(horizon: f64, dx: f64) -> usize {
    (horizon / dx).round().max(1.0) as usize
}

pub fn halving_levels(base: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| base / f64::powi(2.0, i as i32)).collect()
}

pub const NAMES: [&str; 3] = ["convergence-superrep", "pricing-superrep", "smooth-1d"];

pub fn by_name(name: &str) -> Result<BenchmarkSpec> {
    match name {
        "convergence-superrep" => Ok(make_convergence_superrep()),
        "pricing-superrep" => Ok(make_pricing_superrep()),
        "smooth-1d" => Ok(make_smooth_1d()),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// Degeneracy profile of the second diffusion component.
pub fn eta(x: f64) -> f64 {
    x * (3.0 - x)
}

/// Exact solution of `convergence-superrep`.
pub fn superrep_exact(t: f64, x: &Point) -> f64 {
    1.0 + t * t - (-(x[0] * x[0] + x[1] * x[1])).exp()
}

/// `(u_t, u_11, u_22, u_12)` of [`superrep_exact`].
pub fn superrep_derivatives(t: f64, x: &Point) -> [f64; 4] {
    let e = (-(x[0] * x[0] + x[1] * x[1])).exp();
    [
        2.0 * t,
        (2.0 - 4.0 * x[0] * x[0]) * e,
        (2.0 - 4.0 * x[1] * x[1]) * e,
        -4.0 * x[0] * x[1] * e,
    ]
}

/// Forcing making [`superrep_exact`] solve
/// `inf_{|a|=1} { a1^2 u_t - 1/2 tr(sigma sigma^T D^2 u) } = f`.
///
/// The bracket is the quadratic form `a^T Q a` with
/// `Q = [[p, -r/2], [-r/2, q]]`, whose minimum over the unit circle is the
/// smaller eigenvalue of `Q`.
pub fn superrep_forcing(t: f64, x: &Point) -> f64 {
    let [ut, u11, u22, u12] = superrep_derivatives(t, x);
    let e = eta(x[1]);
    let p = ut - 0.5 * x[0] * x[0] * x[1] * u11;
    let q = -0.5 * e * e * u22;
    let r = x[0] * x[1].powf(1.5) * (3.0 - x[1]) * u12;
    0.5 * (p + q - ((p - q) * (p - q) + r * r).sqrt())
}

/// `sigma^a(x) = (a1 x1 sqrt(x2), a2 eta(x2))^T`, a single column.
pub fn superrep_sigma(x: &Point, a: &[f64]) -> Sigma {
    Sigma::column_vector(2, [a[0] * x[0] * x[1].max(0.0).sqrt(), a[1] * eta(x[1])])
}

fn superrep_problem(
    name: &str,
    source: impl Fn(f64, &Point) -> f64 + Send + Sync + 'static,
    initial: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    dirichlet: impl Fn(f64, &Point) -> f64 + Send + Sync + Clone + 'static,
) -> HjbProblem {
    let coeffs = FnCoefficients::new(2, |_, x, a| superrep_sigma(x, a), initial)
        .with_uncontrolled_source(source)
        .with_time_coeff(|_, _, a| a[0] * a[0]);
    // faces: x1 = 0, x1 = 3, x2 = 0, x2 = 3
    let boundary = vec![
        BoundaryCondition::dirichlet(dirichlet.clone()),
        BoundaryCondition::HomogeneousNeumann,
        BoundaryCondition::dirichlet(dirichlet),
        BoundaryCondition::HomogeneousNeumann,
    ];
    HjbProblem::new(
        name,
        Arc::new(coeffs),
        // the data are even in the control, so half the circle suffices
        ControlSet::unit_half_circle(),
        BoxDomain::rectangle([0.0, 0.0], [3.0, 3.0]).expect("valid box"),
        1.0,
        boundary,
    )
    .expect("valid benchmark")
    .with_form(EquationForm::ScaledInf)
}

fn superrep_parameters() -> ParameterMap {
    ParameterMap {
        theta: 1.0,
        variant: StencilVariant::CrandallLions,
        control_resolution: 32,
        control_refinement: 14,
        base_dx: 0.15,
    }
}

pub fn make_convergence_superrep() -> BenchmarkSpec {
    let problem = superrep_problem(
        "convergence-superrep",
        superrep_forcing,
        |x| superrep_exact(0.0, x),
        superrep_exact,
    )
    .with_exact(superrep_exact);
    let rows = [
        (1.5e-1, 2.01e-1, None),
        (7.5e-2, 9.49e-2, Some(1.08)),
        (3.75e-2, 4.29e-2, Some(1.15)),
        (1.875e-2, 1.94e-2, Some(1.15)),
    ];
    BenchmarkSpec {
        name: "convergence-superrep",
        problem,
        reference: rows
            .iter()
            .map(|&(dx, sup_error, rate)| ReferenceRow { dx, sup_error, rate })
            .collect(),
        parameters: superrep_parameters(),
    }
}

/// Put payoff `max(0, 1 - x1)`.
pub fn put_payoff(x: &Point) -> f64 {
    (1.0 - x[0]).max(0.0)
}

pub fn make_pricing_superrep() -> BenchmarkSpec {
    let problem = superrep_problem("pricing-superrep", |_, _| 0.0, put_payoff, |_, x| put_payoff(x));
    BenchmarkSpec {
        name: "pricing-superrep",
        problem,
        reference: Vec::new(),
        parameters: superrep_parameters(),
    }
}

/// Diffusion scale `s`: `sigma = sqrt(2) s`, so `1/2 sigma^2 = s^2`.
pub const SMOOTH_SIGMA_SCALE: f64 = 0.5;
pub const SMOOTH_DRIFT: f64 = 0.25;
pub const SMOOTH_REACTION: f64 = -0.5;

pub fn smooth_exact(t: f64, x: &Point) -> f64 {
    (-t).exp() * x[0].sin()
}

/// `f = u_t - s^2 u_xx - b u_x - c u` for [`smooth_exact`].
pub fn smooth_source(t: f64, x: &Point) -> f64 {
    let e = (-t).exp();
    let (s, c) = x[0].sin_cos();
    let a = SMOOTH_SIGMA_SCALE * SMOOTH_SIGMA_SCALE;
    -e * s + a * e * s - SMOOTH_DRIFT * e * c - SMOOTH_REACTION * e * s
}

pub fn make_smooth_1d() -> BenchmarkSpec {
    let coeffs = FnCoefficients::new(
        1,
        |_, _, _| Sigma::column_vector(1, [SQRT_2 * SMOOTH_SIGMA_SCALE, 0.0]),
        |x| smooth_exact(0.0, x),
    )
    .with_drift(|_, _, _| [SMOOTH_DRIFT, 0.0])
    .with_reaction(|_, _, _| SMOOTH_REACTION)
    .with_uncontrolled_source(smooth_source);
    let problem = HjbProblem::new(
        "smooth-1d",
        Arc::new(coeffs),
        ControlSet::singleton(vec![0.0]),
        BoxDomain::interval(0.0, 3.0).expect("valid interval"),
        1.0,
        vec![
            BoundaryCondition::extended_dirichlet(smooth_exact),
            BoundaryCondition::extended_dirichlet(smooth_exact),
        ],
    )
    .expect("valid benchmark")
    .with_exact(smooth_exact);
    BenchmarkSpec {
        name: "smooth-1d",
        problem,
        reference: Vec::new(),
        parameters: ParameterMap {
            theta: 1.0,
            variant: StencilVariant::CamilliFalcone,
            control_resolution: 1,
            control_refinement: 0,
            base_dx: 0.1,
        },
    }
}
