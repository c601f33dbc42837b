//! Compressed sparse row matrices and a restarted GMRES solver with an
//! ILU(0) right preconditioner. Everything here runs sequentially so that
//! results are bitwise reproducible.

use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a square matrix from per-row `(column, value)` lists.
    /// Duplicate columns are summed and a (possibly zero) diagonal entry is
    /// always stored.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.push((i, 0.0));
            row.sort_by_key(|e| e.0);
            let start = cols.len();
            for (c, v) in row {
                if c >= n {
                    return Err(precondition(format!("column {c} out of range in row {i}")));
                }
                if cols.len() > start && cols[cols.len() - 1] == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(CsrMatrix {
            n,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.get(i, i)
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[p] * x[self.cols[p]];
            }
            *yi = s;
        }
    }

    /// Dense copy, row-major (tests and small diagnostics only).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] += v;
            }
        }
        d
    }
}

/// Incomplete LU factorization with the sparsity pattern of the matrix.
struct Ilu0 {
    lu: CsrMatrix,
    diag_pos: Vec<usize>,
}

impl Ilu0 {
    fn new(a: &CsrMatrix) -> Result<Self> {
        let mut lu = a.clone();
        let n = lu.n;
        let mut diag_pos = vec![0; n];
        for (i, d) in diag_pos.iter_mut().enumerate() {
            *d = (lu.row_ptr[i]..lu.row_ptr[i + 1])
                .find(|&p| lu.cols[p] == i)
                .expect("diagonal entry stored");
        }
        let mut marker = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
            for p in start..end {
                marker[lu.cols[p]] = p;
            }
            for p in start..end {
                let k = lu.cols[p];
                if k >= i {
                    break;
                }
                let pivot = lu.vals[diag_pos[k]];
                if pivot == 0.0 {
                    return Err(precondition(format!("zero pivot in row {k}")));
                }
                let factor = lu.vals[p] / pivot;
                lu.vals[p] = factor;
                for q in diag_pos[k] + 1..lu.row_ptr[k + 1] {
                    let m = marker[lu.cols[q]];
                    if m != usize::MAX {
                        lu.vals[m] -= factor * lu.vals[q];
                    }
                }
            }
            for p in start..end {
                marker[lu.cols[p]] = usize::MAX;
            }
            if lu.vals[diag_pos[i]] == 0.0 {
                return Err(precondition(format!("zero pivot in row {i}")));
            }
        }
        Ok(Ilu0 { lu, diag_pos })
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let lu = &self.lu;
        for i in 0..lu.n {
            let mut s = r[i];
            for p in lu.row_ptr[i]..self.diag_pos[i] {
                s -= lu.vals[p] * z[lu.cols[p]];
            }
            z[i] = s;
        }
        for i in (0..lu.n).rev() {
            let mut s = z[i];
            for p in self.diag_pos[i] + 1..lu.row_ptr[i + 1] {
                s -= lu.vals[p] * z[lu.cols[p]];
            }
            z[i] = s / lu.vals[self.diag_pos[i]];
        }
    }
}

/// Settings for the GMRES solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSolverSettings {
    /// Stop when `|b - A x|_inf <= rtol * |b|_inf`.
    pub rtol: f64,
    /// Krylov dimension between restarts.
    pub restart: usize,
    pub max_iterations: usize,
}

impl Default for LinearSolverSettings {
    fn default() -> Self {
        LinearSolverSettings {
            rtol: 1e-12,
            restart: 50,
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolveStats {
    pub iterations: usize,
    /// Final `|b - A x|_inf`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn residual(a: &CsrMatrix, b: &[f64], x: &[f64], r: &mut [f64]) {
    a.mul_vec(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

/// Linear system `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

impl SparseSystem {
    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        let mut r = vec![0.0; self.rhs.len()];
        residual(&self.matrix, &self.rhs, x, &mut r);
        norm_inf(&r)
    }

    /// Solves starting from `guess`. `extra_target`, when given, tightens the
    /// stopping threshold `rtol |b|_inf` to at most that absolute value.
    pub fn solve(
        &self,
        guess: &[f64],
        settings: &LinearSolverSettings,
        extra_target: Option<f64>,
    ) -> Result<(Vec<f64>, LinearSolveStats)> {
        let n = self.matrix.dim();
        if guess.len() != n || self.rhs.len() != n {
            return Err(precondition("dimension mismatch in linear solve"));
        }
        let mut target = settings.rtol * norm_inf(&self.rhs);
        if let Some(t) = extra_target {
            target = target.min(t);
        }
        gmres(&self.matrix, &self.rhs, guess.to_vec(), target, settings)
    }
}

fn gmres(
    a: &CsrMatrix,
    b: &[f64],
    mut x: Vec<f64>,
    target: f64,
    settings: &LinearSolverSettings,
) -> Result<(Vec<f64>, LinearSolveStats)> {
    let n = a.dim();
    let m = settings.restart.max(1);
    let precond = Ilu0::new(a)?;
    let mut r = vec![0.0; n];
    residual(a, b, &x, &mut r);
    let mut res_inf = norm_inf(&r);
    let mut iterations = 0;
    let mut stalls = 0;

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut precond_basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut h = vec![vec![0.0; m]; m + 1];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut w = vec![0.0; n];

    while res_inf > target {
        if iterations >= settings.max_iterations || stalls >= 3 {
            return Err(Error::LinearSolve {
                iterations,
                residual: res_inf,
                target,
            });
        }
        let beta = dot(&r, &r).sqrt();
        basis.clear();
        precond_basis.clear();
        basis.push(r.iter().map(|v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;
        let mut used = 0;
        for j in 0..m {
            let mut z = vec![0.0; n];
            precond.apply(&basis[j], &mut z);
            a.mul_vec(&z, &mut w);
            precond_basis.push(z);
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                h[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
            }
            let hnext = dot(&w, &w).sqrt();
            h[j + 1][j] = hnext;
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let denom = (h[j][j] * h[j][j] + hnext * hnext).sqrt();
            if denom == 0.0 {
                break;
            }
            cs[j] = h[j][j] / denom;
            sn[j] = hnext / denom;
            h[j][j] = denom;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            used = j + 1;
            iterations += 1;
            if g[j + 1].abs() <= target || hnext == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }
        if used == 0 {
            stalls = 3;
            continue;
        }
        let mut y = vec![0.0; used];
        for i in (0..used).rev() {
            let mut s = g[i];
            for (jj, yj) in y.iter().enumerate().skip(i + 1) {
                s -= h[i][jj] * yj;
            }
            y[i] = s / h[i][i];
        }
        for (yi, z) in y.iter().zip(&precond_basis) {
            for (xk, zk) in x.iter_mut().zip(z) {
                *xk += yi * zk;
            }
        }
        residual(a, b, &x, &mut r);
        let new_res = norm_inf(&r);
        if new_res > 0.999 * res_inf {
            stalls += 1;
        } else {
            stalls = 0;
        }
        res_inf = new_res;
    }
    Ok((
        x,
        LinearSolveStats {
            iterations,
            residual: res_inf,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_like(n: usize) -> CsrMatrix {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![(i, 2.5)];
                if i > 0 {
                    r.push((i - 1, -1.0));
                }
                if i + 1 < n {
                    r.push((i + 1, -1.2));
                }
                if i + 7 < n {
                    r.push((i + 7, -0.2));
                }
                r
            })
            .collect();
        CsrMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_rows(vec![vec![(1, 1.0), (1, 2.0)], vec![(0, -1.0)]]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.diagonal(0), 0.0);
        assert_eq!(m.nnz(), 4);
    }

    #[test]
    fn gmres_solves_m_matrix() {
        let a = laplacian_like(500);
        let xs: Vec<f64> = (0..500).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut b = vec![0.0; 500];
        a.mul_vec(&xs, &mut b);
        let sys = SparseSystem { matrix: a, rhs: b };
        let (x, stats) = sys.solve(&vec![0.0; 500], &LinearSolverSettings::default(), None).unwrap();
        assert!(stats.residual <= 1e-12 * 3.0);
        for (u, v) in x.iter().zip(&xs) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let a = laplacian_like(200);
        let b: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let sys = SparseSystem { matrix: a, rhs: b };
        let s = LinearSolverSettings::default();
        let (x1, _) = sys.solve(&vec![0.0; 200], &s, None).unwrap();
        let (x2, _) = sys.solve(&vec![0.0; 200], &s, None).unwrap();
        assert_eq!(x1, x2);
    }

    #[test]
    fn zero_rhs_returns_guess_when_exact() {
        let sys = SparseSystem {
            matrix: laplacian_like(10),
            rhs: vec![0.0; 10],
        };
        let (x, stats) = sys.solve(&[0.0; 10], &LinearSolverSettings::default(), None).unwrap();
        assert_eq!(x, vec![0.0; 10]);
        assert_eq!(stats.iterations, 0);
    }
}
