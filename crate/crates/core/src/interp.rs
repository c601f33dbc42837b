//! Monotone piecewise-linear interpolation: linear on intervals in 1D, P1 on
//! the regular triangulation in 2D. Weights are the barycentric coordinates
//! of the containing simplex, hence nonnegative and summing to one.

use crate::error::Result;
use crate::grid::{GridField, SpatialGrid};
use crate::problem::Point;

/// Sparse nonnegative weights `(node, w)`; at most `N + 1` entries, zero
/// weights dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationWeights {
    entries: [(usize, f64); 3],
    len: usize,
}

impl InterpolationWeights {
    pub fn iter(&self) -> impl Iterator<Item = &(usize, f64)> {
        self.entries[..self.len].iter()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight_of(&self, node: usize) -> f64 {
        self.iter().filter(|e| e.0 == node).map(|e| e.1).sum()
    }

    pub fn apply(&self, values: &[f64]) -> f64 {
        self.iter().map(|&(j, w)| w * values[j]).sum()
    }
}

pub(crate) fn weights_unchecked(grid: &SpatialGrid, x: &Point) -> InterpolationWeights {
    let loc = grid.locate_unchecked(x);
    let mut entries = [(0usize, 0.0f64); 3];
    let mut len = 0;
    for k in 0..loc.len {
        if loc.barycentric[k] != 0.0 {
            entries[len] = (loc.vertices[k], loc.barycentric[k]);
            len += 1;
        }
    }
    InterpolationWeights { entries, len }
}

/// Interpolation weights at `x`, which must lie in the grid box.
pub fn weights_at(grid: &SpatialGrid, x: &Point) -> Result<InterpolationWeights> {
    grid.locate_cell(x)?;
    Ok(weights_unchecked(grid, x))
}

/// `(I U)(x) = sum_j U_j w_j(x)`.
pub fn interpolate(field: &GridField, x: &Point) -> Result<f64> {
    Ok(weights_at(field.grid(), x)?.apply(field.values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::BoxDomain;
    use std::sync::Arc;

    fn grid2(dx: f64) -> Arc<SpatialGrid> {
        Arc::new(SpatialGrid::new(BoxDomain::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap(), dx).unwrap())
    }

    #[test]
    fn node_weight_is_kronecker() {
        let g = grid2(0.25);
        for i in 0..g.node_count() {
            let w = weights_at(&g, &g.node(i)).unwrap();
            assert_eq!(w.len(), 1);
            assert_eq!(w.iter().next(), Some(&(i, 1.0)));
        }
    }

    #[test]
    fn centroid_weights() {
        let g = grid2(0.25);
        // lower triangle of the first cell: (0,0), (0.25,0), (0.25,0.25)
        let c = [0.5 / 3.0, 0.25 / 3.0];
        let w = weights_at(&g, &c).unwrap();
        assert_eq!(w.len(), 3);
        for &(_, v) in w.iter() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn one_d_ratio() {
        let g = SpatialGrid::new(BoxDomain::interval(0.0, 1.0).unwrap(), 0.5).unwrap();
        let w = weights_at(&g, &[0.125, 0.0]).unwrap();
        let e: Vec<_> = w.iter().copied().collect();
        assert_eq!(e, vec![(0, 0.75), (1, 0.25)]);
    }

    #[test]
    fn quadratic_error_bound() {
        let g = Arc::new(SpatialGrid::new(BoxDomain::interval(0.0, 1.0).unwrap(), 0.5).unwrap());
        let f = GridField::from_fn(g, |x| x[0] * x[0]);
        let v = interpolate(&f, &[0.25, 0.0]).unwrap();
        assert_eq!(v, 0.125);
        // |phi''| = 2, K = 1/8
        assert!((v - 0.0625).abs() <= 0.125 * 2.0 * 0.25 + 1e-15);
    }

    #[test]
    fn affine_exact() {
        let g = grid2(0.125);
        let f = GridField::from_fn(g, |x| 0.3 * x[0] - 1.7 * x[1] + 0.2);
        for p in [[0.13, 0.77], [0.5, 0.5], [0.999, 0.001]] {
            let v = interpolate(&f, &p).unwrap();
            assert!((v - (0.3 * p[0] - 1.7 * p[1] + 0.2)).abs() < 1e-14);
        }
    }

    #[test]
    fn outside_rejected() {
        let g = grid2(0.5);
        assert!(weights_at(&g, &[1.5, 0.0]).is_err());
    }
}
