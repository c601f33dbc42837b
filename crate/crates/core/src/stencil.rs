//! Displacement stencils of the semi-Lagrangian operator
//!
//! ```text
//! L_k[phi](x) = sum_{i=1}^M [phi(x + y+_i) - 2 phi(x) + phi(x + y-_i)] / (2 k^2)
//! ```
//!
//! and numerical checks of the moment conditions that make it a second order
//! approximation of `1/2 tr(sigma sigma^T D^2) + b . D`, plus the
//! covariance-type two-point condition used in error analysis.

use std::fmt;
use std::str::FromStr;

use crate::error::{precondition, Error, Result};
use crate::problem::{HjbProblem, Point, Sigma, MAX_COLUMNS};

/// The five built-in ways of choosing displacements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilVariant {
    /// `M = 1`, `y+- = k^2 b`. Drift only.
    Falcone,
    /// `M = P`, `y+-_j = +-k sigma_j`. Diffusion only.
    CrandallLions,
    /// `M = P`, `y+-_j = +-k sigma_j + (k^2 / P) b`.
    CamilliFalcone,
    /// `M = P + 1`, diffusion pairs plus one drift pair `k^2 b`.
    CombinedDriftDiffusion,
    /// `M = P`, drift `k^2 b` merged into the last diffusion pair.
    MergedLastColumn,
}

impl StencilVariant {
    pub const ALL: [StencilVariant; 5] = [
        StencilVariant::Falcone,
        StencilVariant::CrandallLions,
        StencilVariant::CamilliFalcone,
        StencilVariant::CombinedDriftDiffusion,
        StencilVariant::MergedLastColumn,
    ];

    /// 1-based number in the usual enumeration of the variants.
    pub fn number(&self) -> usize {
        match self {
            StencilVariant::Falcone => 1,
            StencilVariant::CrandallLions => 2,
            StencilVariant::CamilliFalcone => 3,
            StencilVariant::CombinedDriftDiffusion => 4,
            StencilVariant::MergedLastColumn => 5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StencilVariant::Falcone => "falcone",
            StencilVariant::CrandallLions => "crandall-lions",
            StencilVariant::CamilliFalcone => "camilli-falcone",
            StencilVariant::CombinedDriftDiffusion => "combined",
            StencilVariant::MergedLastColumn => "merged-last-column",
        }
    }

    /// Number of displacement pairs for `P` diffusion columns.
    pub fn pair_count(&self, columns: usize) -> usize {
        match self {
            StencilVariant::Falcone => 1,
            StencilVariant::CombinedDriftDiffusion => columns + 1,
            _ => columns,
        }
    }

    /// The part of `(sigma, b)` the variant approximates: Falcone drops the
    /// diffusion and Crandall-Lions drops the drift.
    pub fn target_coefficients(&self, sigma: &Sigma, drift: &Point) -> (Sigma, Point) {
        match self {
            StencilVariant::Falcone => (Sigma::zeros(sigma.dim(), sigma.cols()), *drift),
            StencilVariant::CrandallLions => (*sigma, [0.0; 2]),
            _ => (*sigma, *drift),
        }
    }
}

impl fmt::Display for StencilVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StencilVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = match s.to_ascii_lowercase().as_str() {
            "1" | "falcone" => StencilVariant::Falcone,
            "2" | "crandall-lions" | "crandall_lions" => StencilVariant::CrandallLions,
            "3" | "camilli-falcone" | "camilli_falcone" => StencilVariant::CamilliFalcone,
            "4" | "combined" | "combined-drift-diffusion" => StencilVariant::CombinedDriftDiffusion,
            "5" | "merged-last-column" | "merged" => StencilVariant::MergedLastColumn,
            _ => return Err(Error::UnknownVariant(s.to_string())),
        };
        Ok(v)
    }
}

const MAX_PAIRS: usize = MAX_COLUMNS + 1;

/// Displacement pairs `(y+_i, y-_i)`, `i = 1..M`, for one `(t, x, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementSet {
    dim: usize,
    k: f64,
    pairs: [(Point, Point); MAX_PAIRS],
    len: usize,
}

impl DisplacementSet {
    /// Arbitrary user-supplied displacements.
    pub fn from_pairs(dim: usize, k: f64, pairs: &[(Point, Point)]) -> Result<Self> {
        if !(k > 0.0) {
            return Err(precondition("k must be positive"));
        }
        if pairs.is_empty() || pairs.len() > MAX_PAIRS {
            return Err(precondition(format!("need 1..={MAX_PAIRS} displacement pairs")));
        }
        let mut arr = [([0.0; 2], [0.0; 2]); MAX_PAIRS];
        arr[..pairs.len()].copy_from_slice(pairs);
        Ok(DisplacementSet {
            dim,
            k,
            pairs: arr,
            len: pairs.len(),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of pairs `M`.
    pub fn m(&self) -> usize {
        self.len
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.pairs[..self.len]
    }

    /// Largest displacement length.
    pub fn max_length(&self) -> f64 {
        self.pairs()
            .iter()
            .flat_map(|(p, m)| [norm(p), norm(m)])
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.pairs()
            .iter()
            .all(|(p, m)| p.iter().chain(m.iter()).all(|v| v.is_finite()))
    }
}

fn norm(v: &Point) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

fn axpy(a: f64, x: &Point, y: &Point) -> Point {
    [a * x[0] + y[0], a * x[1] + y[1]]
}

pub(crate) fn build_unchecked(
    variant: StencilVariant,
    sigma: &Sigma,
    drift: &Point,
    k: f64,
) -> DisplacementSet {
    let dim = sigma.dim();
    let p = sigma.cols();
    let k2 = k * k;
    let drift_step = [k2 * drift[0], k2 * drift[1]];
    let mut pairs = [([0.0; 2], [0.0; 2]); MAX_PAIRS];
    let len = variant.pair_count(p);
    match variant {
        StencilVariant::Falcone => pairs[0] = (drift_step, drift_step),
        StencilVariant::CrandallLions => {
            for (j, pair) in pairs.iter_mut().enumerate().take(p) {
                let c = sigma.column(j);
                *pair = ([k * c[0], k * c[1]], [-k * c[0], -k * c[1]]);
            }
        }
        StencilVariant::CamilliFalcone => {
            let shift = [drift_step[0] / p as f64, drift_step[1] / p as f64];
            for (j, pair) in pairs.iter_mut().enumerate().take(p) {
                let c = sigma.column(j);
                *pair = (axpy(k, &c, &shift), axpy(-k, &c, &shift));
            }
        }
        StencilVariant::CombinedDriftDiffusion => {
            for (j, pair) in pairs.iter_mut().enumerate().take(p) {
                let c = sigma.column(j);
                *pair = ([k * c[0], k * c[1]], [-k * c[0], -k * c[1]]);
            }
            pairs[p] = (drift_step, drift_step);
        }
        StencilVariant::MergedLastColumn => {
            for (j, pair) in pairs.iter_mut().enumerate().take(p) {
                let c = sigma.column(j);
                *pair = if j + 1 == p {
                    (axpy(k, &c, &drift_step), axpy(-k, &c, &drift_step))
                } else {
                    ([k * c[0], k * c[1]], [-k * c[0], -k * c[1]])
                };
            }
        }
    }
    if dim == 1 {
        for pair in &mut pairs[..len] {
            pair.0[1] = 0.0;
            pair.1[1] = 0.0;
        }
    }
    DisplacementSet {
        dim,
        k,
        pairs,
        len,
    }
}

/// Displacements of `variant` for the coefficients `sigma`, `drift`.
pub fn build_displacements(
    variant: StencilVariant,
    sigma: &Sigma,
    drift: &Point,
    k: f64,
) -> Result<DisplacementSet> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(precondition(format!("k must be positive, got {k}")));
    }
    Ok(build_unchecked(variant, sigma, drift, k))
}

/// Residuals of the four moment conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Y1Report {
    /// `|sum(y+ + y-) - 2 k^2 b|`
    pub first: f64,
    /// `|sum(y+ y+^T + y- y-^T) - 2 k^2 sigma sigma^T|_F`
    pub second: f64,
    /// largest third-moment component
    pub third: f64,
    /// largest fourth-moment component
    pub fourth: f64,
    /// `C k^4` with `C = 10 (1 + |b| + |sigma|_F)^4`
    pub threshold: f64,
    pub pass: bool,
}

/// Checks the moment conditions of `ds` against target coefficients
/// `(sigma, drift)`. Pass iff every residual is at most `threshold`.
pub fn check_y1(ds: &DisplacementSet, sigma: &Sigma, drift: &Point) -> Y1Report {
    let dim = ds.dim();
    let k2 = ds.k() * ds.k();
    let mut first = [0.0; 2];
    let mut second = [[0.0; 2]; 2];
    let mut third = [[[0.0; 2]; 2]; 2];
    let mut fourth = [[[[0.0; 2]; 2]; 2]; 2];
    for (p, m) in ds.pairs() {
        for y in [p, m] {
            for a in 0..dim {
                first[a] += y[a];
                for b in 0..dim {
                    second[a][b] += y[a] * y[b];
                    for c in 0..dim {
                        third[a][b][c] += y[a] * y[b] * y[c];
                        for d in 0..dim {
                            fourth[a][b][c][d] += y[a] * y[b] * y[c] * y[d];
                        }
                    }
                }
            }
        }
    }
    let cov = sigma.covariance();
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    let mut r3: f64 = 0.0;
    let mut r4: f64 = 0.0;
    for a in 0..dim {
        r1 += (first[a] - 2.0 * k2 * drift[a]).powi(2);
        for b in 0..dim {
            r2 += (second[a][b] - 2.0 * k2 * cov[a][b]).powi(2);
            for c in 0..dim {
                r3 = r3.max(third[a][b][c].abs());
                for d in 0..dim {
                    r4 = r4.max(fourth[a][b][c][d].abs());
                }
            }
        }
    }
    let scale = 1.0 + norm(drift) + sigma.frobenius_norm();
    let threshold = 10.0 * scale.powi(4) * k2 * k2;
    let (first, second) = (r1.sqrt(), r2.sqrt());
    Y1Report {
        first,
        second,
        third: r3,
        fourth: r4,
        threshold,
        pass: first <= threshold && second <= threshold && r3 <= threshold && r4 <= threshold,
    }
}

/// Outcome of the two-point covariance condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Y2Report {
    /// `LHS - RHS` of the vector inequality, per component (must be <= 0).
    pub vector_residual: Point,
    /// Smallest eigenvalue of `RHS - LHS` of the matrix inequality.
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn min_eigenvalue_sym(m: &[[f64; 2]; 2], dim: usize) -> f64 {
    if dim == 1 {
        return m[0][0];
    }
    let half_trace = 0.5 * (m[0][0] + m[1][1]);
    let half_diff = 0.5 * (m[0][0] - m[1][1]);
    let off = 0.5 * (m[0][1] + m[1][0]);
    half_trace - (half_diff * half_diff + off * off).sqrt()
}

/// Evaluates the two-point covariance condition between the stencils at
/// `(t, x)` and `(t, y)` for control `control`. Diagnostic only.
#[allow(clippy::too_many_arguments)]
pub fn check_y2(
    variant: StencilVariant,
    problem: &HjbProblem,
    control: &[f64],
    t: f64,
    x: &Point,
    y: &Point,
    k: f64,
) -> Result<Y2Report> {
    let cx = problem.evaluate_coefficients(t, x, control)?;
    let cy = problem.evaluate_coefficients(t, y, control)?;
    let (sx, bx) = variant.target_coefficients(&cx.sigma, &cx.drift);
    let (sy, by) = variant.target_coefficients(&cy.sigma, &cy.drift);
    let dx = build_displacements(variant, &sx, &bx, k)?;
    let dy = build_displacements(variant, &sy, &by, k)?;
    let dim = problem.dim();
    let k2 = k * k;

    let mut lhs1 = [0.0; 2];
    let mut lhs2 = [[0.0; 2]; 2];
    for ((px, mx), (py, my)) in dx.pairs().iter().zip(dy.pairs()) {
        for a in 0..dim {
            lhs1[a] += px[a] + mx[a] - py[a] - my[a];
        }
        let dp = [px[0] - py[0], px[1] - py[1]];
        let dm = [mx[0] - my[0], mx[1] - my[1]];
        for a in 0..dim {
            for b in 0..dim {
                lhs2[a][b] += dp[a] * dp[b] + dm[a] * dm[b];
            }
        }
    }
    let db = [bx[0] - by[0], bx[1] - by[1]];
    let mut rhs2 = [[0.0; 2]; 2];
    for j in 0..sx.cols() {
        let (cx, cy) = (sx.column(j), sy.column(j));
        let d = [cx[0] - cy[0], cx[1] - cy[1]];
        for a in 0..dim {
            for b in 0..dim {
                rhs2[a][b] += 2.0 * k2 * d[a] * d[b];
            }
        }
    }
    for a in 0..dim {
        for b in 0..dim {
            rhs2[a][b] += 2.0 * k2 * k2 * db[a] * db[b];
        }
    }
    let mut vector_residual = [0.0; 2];
    let mut scale: f64 = f64::MIN_POSITIVE;
    for a in 0..dim {
        let rhs1 = 2.0 * k2 * db[a];
        vector_residual[a] = lhs1[a] - rhs1;
        scale = scale.max(lhs1[a].abs()).max(rhs1.abs());
    }
    let mut diff = [[0.0; 2]; 2];
    for a in 0..dim {
        for b in 0..dim {
            diff[a][b] = rhs2[a][b] - lhs2[a][b];
            scale = scale.max(lhs2[a][b].abs()).max(rhs2[a][b].abs());
        }
    }
    let tolerance = 1e-12 * scale;
    let min_eigenvalue = min_eigenvalue_sym(&diff, dim);
    let pass = vector_residual[..dim].iter().all(|&r| r <= tolerance) && min_eigenvalue >= -tolerance;
    Ok(Y2Report {
        vector_residual,
        min_eigenvalue,
        tolerance,
        pass,
    })
}
