//! Uniform space and time grids.
//!
//! Nodes are numbered with the first axis varying fastest:
//! `index = j * n0 + i` for the node at `(lo0 + i dx, lo1 + j dx)`.
//! In 2D every lattice cell is split along the diagonal running from its
//! lower-left to its upper-right corner; the triangle below the diagonal
//! has id `2 * cell`, the one above `2 * cell + 1`.

use std::io::Write;
use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::problem::{BoxDomain, Face, Point};

/// Diagonal used by the regular triangulation, echoed in run manifests.
pub const TRIANGULATION_DIAGONAL: &str = "lower-left to upper-right";

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    domain: BoxDomain,
    counts: [usize; 2],
    spacing: f64,
}

/// Simplex (or interval) containing a point, with barycentric coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellLocation {
    pub cell: usize,
    /// Vertex node indices; only the first `len` are meaningful.
    pub vertices: [usize; 3],
    pub barycentric: [f64; 3],
    pub len: usize,
}

impl SpatialGrid {
    /// Builds the lattice with spacing `dx`, which must divide every side
    /// length (up to a relative 1e-9).
    pub fn new(domain: BoxDomain, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(precondition("grid spacing must be positive"));
        }
        let mut counts = [1usize; 2];
        for axis in 0..domain.dim {
            let len = domain.hi[axis] - domain.lo[axis];
            let cells = (len / dx).round();
            if cells < 1.0 || ((cells * dx - len).abs() > 1e-9 * len) {
                return Err(precondition(format!(
                    "spacing {dx} does not divide side length {len} of axis {axis}"
                )));
            }
            counts[axis] = cells as usize + 1;
        }
        SpatialGrid::with_cells(domain, [counts[0] - 1, counts[1].saturating_sub(1)])
    }

    /// Builds the lattice from a number of cells per axis. In 2D both axes
    /// must end up with the same spacing.
    pub fn with_cells(domain: BoxDomain, cells: [usize; 2]) -> Result<Self> {
        if cells[0] == 0 || (domain.dim == 2 && cells[1] == 0) {
            return Err(precondition("need at least one cell per axis"));
        }
        let spacing = (domain.hi[0] - domain.lo[0]) / cells[0] as f64;
        let mut counts = [cells[0] + 1, 1];
        if domain.dim == 2 {
            let other = (domain.hi[1] - domain.lo[1]) / cells[1] as f64;
            if (other - spacing).abs() > 1e-9 * spacing {
                return Err(precondition(format!(
                    "unequal spacing per axis: {spacing} vs {other}"
                )));
            }
            counts[1] = cells[1] + 1;
        }
        Ok(SpatialGrid {
            domain,
            counts,
            spacing,
        })
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn counts(&self) -> [usize; 2] {
        self.counts
    }

    pub fn node_count(&self) -> usize {
        self.counts[0] * self.counts[1]
    }

    pub fn index(&self, coords: [usize; 2]) -> usize {
        debug_assert!(coords[0] < self.counts[0] && coords[1] < self.counts[1]);
        coords[1] * self.counts[0] + coords[0]
    }

    pub fn coords(&self, index: usize) -> [usize; 2] {
        [index % self.counts[0], index / self.counts[0]]
    }

    fn axis_coordinate(&self, axis: usize, i: usize) -> f64 {
        if i + 1 == self.counts[axis] {
            self.domain.hi[axis]
        } else {
            self.domain.lo[axis] + i as f64 * self.spacing
        }
    }

    pub fn node(&self, index: usize) -> Point {
        let c = self.coords(index);
        let mut p = [0.0; 2];
        for (axis, slot) in p.iter_mut().enumerate().take(self.dim()) {
            *slot = self.axis_coordinate(axis, c[axis]);
        }
        p
    }

    pub fn nodes(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.node_count()).map(|i| self.node(i))
    }

    /// Faces of the box the node lies on.
    pub fn node_faces(&self, index: usize) -> impl Iterator<Item = Face> {
        let c = self.coords(index);
        let counts = self.counts;
        (0..self.dim()).flat_map(move |axis| {
            let lower = (c[axis] == 0).then_some(Face { axis, upper: false });
            let upper = (c[axis] + 1 == counts[axis]).then_some(Face { axis, upper: true });
            lower.into_iter().chain(upper)
        })
    }

    pub fn clamp_to_domain(&self, x: &Point) -> Point {
        self.domain.clamp(x)
    }

    /// Cell index along one axis and the local coordinate in `[0, 1]`.
    /// Points on an interior lattice line go to the lower cell.
    fn axis_cell(&self, axis: usize, v: f64) -> (usize, f64) {
        let cells = self.counts[axis] - 1;
        let s = (v - self.domain.lo[axis]) / self.spacing;
        // ceil(s) - 1 without the libm call: truncate, and step down on lattice lines
        let t = s as isize;
        let lower = if t > 0 && t as f64 == s { t - 1 } else { t };
        let mut i = lower.clamp(0, cells as isize - 1) as usize;
        let offset = |i: usize| {
            let a = self.axis_coordinate(axis, i);
            (v - a) / (self.axis_coordinate(axis, i + 1) - a)
        };
        let mut local = offset(i);
        // guard against rounding pushing the coordinate just outside the cell
        if local > 1.0 && i + 1 < cells {
            i += 1;
            local = offset(i);
        }
        (i, local.clamp(0.0, 1.0))
    }

    pub fn locate_cell(&self, x: &Point) -> Result<CellLocation> {
        if !x[..self.dim()].iter().all(|v| v.is_finite()) || !self.domain.contains(x) {
            return Err(precondition(format!("point {x:?} outside the grid box")));
        }
        Ok(self.locate_unchecked(x))
    }

    /// `x` must lie in the box.
    pub(crate) fn locate_unchecked(&self, x: &Point) -> CellLocation {
        let (i, s) = self.axis_cell(0, x[0]);
        if self.dim() == 1 {
            return CellLocation {
                cell: i,
                vertices: [i, i + 1, 0],
                barycentric: [1.0 - s, s, 0.0],
                len: 2,
            };
        }
        let (j, t) = self.axis_cell(1, x[1]);
        let n0 = self.counts[0];
        let v00 = j * n0 + i;
        let v10 = v00 + 1;
        let v01 = v00 + n0;
        let v11 = v01 + 1;
        let square = j * (n0 - 1) + i;
        if s >= t {
            CellLocation {
                cell: 2 * square,
                vertices: [v00, v10, v11],
                barycentric: [1.0 - s, s - t, t],
                len: 3,
            }
        } else {
            CellLocation {
                cell: 2 * square + 1,
                vertices: [v00, v11, v01],
                barycentric: [1.0 - t, s, t - s],
                len: 3,
            }
        }
    }

    /// Vertex coordinates of a simplex id (for tests and diagnostics).
    pub fn cell_vertices(&self, cell: usize) -> Vec<Point> {
        if self.dim() == 1 {
            return vec![self.node(cell), self.node(cell + 1)];
        }
        let n0 = self.counts[0];
        let square = cell / 2;
        let (i, j) = (square % (n0 - 1), square / (n0 - 1));
        let v00 = j * n0 + i;
        let ids = if cell.is_multiple_of(2) {
            [v00, v00 + 1, v00 + n0 + 1]
        } else {
            [v00, v00 + n0 + 1, v00 + n0]
        };
        ids.iter().map(|&v| self.node(v)).collect()
    }

    pub fn cell_count(&self) -> usize {
        if self.dim() == 1 {
            self.counts[0] - 1
        } else {
            2 * (self.counts[0] - 1) * (self.counts[1] - 1)
        }
    }
}

/// Free function form of [`SpatialGrid::locate_cell`].
pub fn locate_cell(grid: &SpatialGrid, x: &Point) -> Result<CellLocation> {
    grid.locate_cell(x)
}

/// Free function form of [`SpatialGrid::clamp_to_domain`].
pub fn clamp_to_domain(grid: &SpatialGrid, x: &Point) -> Point {
    grid.clamp_to_domain(x)
}

/// Uniform time levels `t_n = n T / N_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(precondition("horizon must be positive"));
        }
        Ok(TimeGrid { horizon, steps })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Step size; zero when there are no steps.
    pub fn dt(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.horizon / self.steps as f64
        }
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.horizon
        } else {
            n as f64 * self.dt()
        }
    }
}

/// One value per grid node at a single time level.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: Arc<SpatialGrid>,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(grid: Arc<SpatialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(precondition(format!(
                "field has {} values for {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(precondition(format!("non-finite value at node {i}")));
        }
        Ok(GridField { grid, values })
    }

    pub fn from_fn(grid: Arc<SpatialGrid>, f: impl Fn(&Point) -> f64) -> Self {
        let values = grid.nodes().map(|x| f(&x)).collect();
        GridField { grid, values }
    }

    pub(crate) fn from_vec_unchecked(grid: Arc<SpatialGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.node_count());
        GridField { grid, values }
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Writes `x1,x2,value` (or `x1,value` in 1D) rows in node order with 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let dim = self.grid.dim();
        if dim == 1 {
            writeln!(out, "x1,value")?;
        } else {
            writeln!(out, "x1,x2,value")?;
        }
        for (i, v) in self.values.iter().enumerate() {
            let x = self.grid.node(i);
            if dim == 1 {
                writeln!(out, "{:.16e},{:.16e}", x[0], v)?;
            } else {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", x[0], x[1], v)?;
            }
        }
        Ok(())
    }
}
