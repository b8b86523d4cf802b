use faer::linalg::matmul::matmul;
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Accum, Mat, MatMut, MatRef, Par, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::GridOperator;
use super::{Method, Spectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Required relative residual ‖Av − λv‖ / λ.
    pub tol: f64,
    /// Cap on subspace expansions.
    pub max_iterations: usize,
    /// Operators up to this size are diagonalized densely.
    pub dense_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iterations: 1000,
            dense_threshold: 400,
        }
    }
}

/// The `count` smallest eigenvalues of a grid operator.
pub fn fd_spectrum(op: &GridOperator, count: usize, seed: u64) -> Result<Spectrum> {
    fd_spectrum_with(op, count, seed, SolverOptions::default())
}

pub fn fd_spectrum_with(
    op: &GridOperator,
    count: usize,
    seed: u64,
    opts: SolverOptions,
) -> Result<Spectrum> {
    let n = op.size();
    if count == 0 || count > n {
        return Err(Error::Precondition(format!(
            "requested {count} eigenvalues of a {n}×{n} operator"
        )));
    }
    let values = if n <= opts.dense_threshold {
        dense_eigenvalues(op, count, opts.tol)?
    } else {
        ShiftInvert::new(op, count, seed, opts)?.run()?
    };
    let limit = *values.last().expect("count >= 1");
    Spectrum::new(values, Method::FiniteDifference, Some(op.h()), op.domain_id(), limit)
}

fn linalg_error(what: &str, e: impl std::fmt::Debug) -> Error {
    Error::LinearAlgebra(format!("{what}: {e:?}"))
}

fn dense_eigenvalues(op: &GridOperator, count: usize, tol: f64) -> Result<Vec<f64>> {
    let n = op.size();
    let mut a = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        for (j, v) in op.row(i) {
            a[(i, j)] = v;
        }
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| linalg_error("dense eigendecomposition", e))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut values = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut au = vec![0.0; n];
    for k in 0..count {
        let lam = s[k];
        let v: Vec<f64> = (0..n).map(|i| u[(i, k)]).collect();
        op.matvec(&v, &mut au);
        let r = au
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - lam * x).powi(2))
            .sum::<f64>()
            .sqrt();
        residuals.push(r / lam.abs());
        values.push(lam);
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if !(worst <= tol) || values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Convergence {
            iterations: 0,
            worst_residual: worst,
            residuals,
        });
    }
    Ok(values)
}

/// Block Krylov expansion with the exact inverse of A, Rayleigh–Ritz on A
/// itself and thick restarts.
struct ShiftInvert<'a> {
    op: &'a GridOperator,
    llt: faer::sparse::linalg::solvers::Llt<usize, f64>,
    count: usize,
    keep: usize,
    max_basis: usize,
    opts: SolverOptions,
    rng: ChaCha8Rng,
    v: Mat<f64>,
    av: Mat<f64>,
    h: Mat<f64>,
    m: usize,
}

impl<'a> ShiftInvert<'a> {
    fn new(op: &'a GridOperator, count: usize, seed: u64, opts: SolverOptions) -> Result<Self> {
        let n = op.size();
        let (row_ptr, col_idx, values) = op.csr();
        let mut trips = Vec::with_capacity(values.len());
        for i in 0..n {
            for k in row_ptr[i]..row_ptr[i + 1] {
                trips.push(Triplet::new(i, col_idx[k], values[k]));
            }
        }
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trips)
            .map_err(|e| linalg_error("sparse assembly", e))?;
        let llt = a
            .sp_cholesky(Side::Lower)
            .map_err(|e| linalg_error("sparse Cholesky factorization", e))?;
        let keep = (count + (count / 2).max(4)).min(n);
        let max_basis = (3 * keep).max(keep + 20).min(n);
        Ok(Self {
            op,
            llt,
            count,
            keep,
            max_basis,
            opts,
            rng: ChaCha8Rng::seed_from_u64(seed),
            v: Mat::zeros(n, max_basis),
            av: Mat::zeros(n, max_basis),
            h: Mat::zeros(max_basis, max_basis),
            m: 0,
        })
    }

    fn apply_a(&self, src: MatRef<'_, f64>, mut dst: MatMut<'_, f64>) {
        let n = self.op.size();
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        for j in 0..src.ncols() {
            for i in 0..n {
                x[i] = src[(i, j)];
            }
            self.op.matvec(&x, &mut y);
            for i in 0..n {
                dst[(i, j)] = y[i];
            }
        }
    }

    fn random_block(&mut self, cols: usize) -> Mat<f64> {
        let n = self.op.size();
        Mat::from_fn(n, cols, |_, _| self.rng.random::<f64>() - 0.5)
    }

    /// Orthonormalizes `w` against the basis and itself; appends the
    /// surviving columns and returns how many were added.
    fn extend(&mut self, mut w: Mat<f64>) -> usize {
        let n = self.op.size();
        let m = self.m;
        let b = w.ncols();
        let norms0: Vec<f64> = (0..b).map(|j| w.col(j).norm_l2()).collect();
        if m > 0 {
            for _ in 0..2 {
                let vb = self.v.as_ref().subcols(0, m);
                let mut c = Mat::<f64>::zeros(m, b);
                matmul(c.as_mut(), Accum::Replace, vb.transpose(), w.as_ref(), 1.0, Par::Seq);
                matmul(w.as_mut(), Accum::Add, vb, c.as_ref(), -1.0, Par::Seq);
            }
        }
        let mut kept: Vec<usize> = Vec::with_capacity(b);
        for j in 0..b {
            for _ in 0..2 {
                for &k in &kept {
                    let d = w.col(k).transpose() * w.col(j);
                    for i in 0..n {
                        let wk = w[(i, k)];
                        w[(i, j)] -= d * wk;
                    }
                }
            }
            let nrm = w.col(j).norm_l2();
            if nrm > 1e-10 * norms0[j] && nrm > 0.0 && m + kept.len() < self.max_basis {
                for i in 0..n {
                    w[(i, j)] /= nrm;
                }
                kept.push(j);
            }
        }
        let added = kept.len();
        if added == 0 {
            return 0;
        }
        let mut wk = Mat::<f64>::zeros(n, added);
        for (c, &j) in kept.iter().enumerate() {
            wk.col_mut(c).copy_from(w.col(j));
        }
        let mut awk = Mat::<f64>::zeros(n, added);
        self.apply_a(wk.as_ref(), awk.as_mut());
        let mut hv = Mat::<f64>::zeros(m + added, added);
        {
            let vb = self.v.as_ref().subcols(0, m);
            if m > 0 {
                matmul(
                    hv.as_mut().subrows_mut(0, m),
                    Accum::Replace,
                    vb.transpose(),
                    awk.as_ref(),
                    1.0,
                    Par::Seq,
                );
            }
            matmul(
                hv.as_mut().subrows_mut(m, added),
                Accum::Replace,
                wk.as_ref().transpose(),
                awk.as_ref(),
                1.0,
                Par::Seq,
            );
        }
        for c in 0..added {
            self.v.col_mut(m + c).copy_from(wk.col(c));
            self.av.col_mut(m + c).copy_from(awk.col(c));
            for r in 0..m + added {
                self.h[(r, m + c)] = hv[(r, c)];
                self.h[(m + c, r)] = hv[(r, c)];
            }
        }
        for c in 0..added {
            for r in 0..added {
                let s = 0.5 * (self.h[(m + r, m + c)] + self.h[(m + c, m + r)]);
                self.h[(m + r, m + c)] = s;
                self.h[(m + c, m + r)] = s;
            }
        }
        self.m += added;
        added
    }

    fn run(mut self) -> Result<Vec<f64>> {
        let start = self.random_block(self.keep);
        self.extend(start);
        let mut last_residuals = Vec::new();
        for iteration in 0..self.opts.max_iterations {
            let m = self.m;
            let hm = self.h.as_ref().submatrix(0, 0, m, m).to_owned();
            let evd = hm
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| linalg_error("projected eigendecomposition", e))?;
            let theta: Vec<f64> = (0..m).map(|i| evd.S().column_vector()[i]).collect();
            let nk = self.keep.min(m);
            let y = evd.U().subcols(0, nk);
            let n = self.op.size();
            let mut u = Mat::<f64>::zeros(n, nk);
            let mut au = Mat::<f64>::zeros(n, nk);
            matmul(u.as_mut(), Accum::Replace, self.v.as_ref().subcols(0, m), y, 1.0, Par::Seq);
            matmul(au.as_mut(), Accum::Replace, self.av.as_ref().subcols(0, m), y, 1.0, Par::Seq);
            let residuals: Vec<f64> = (0..nk)
                .map(|i| {
                    let mut s = 0.0;
                    for r in 0..n {
                        let d = au[(r, i)] - theta[i] * u[(r, i)];
                        s += d * d;
                    }
                    s.sqrt() / theta[i].abs()
                })
                .collect();
            let tol = self.opts.tol;
            if nk >= self.count && residuals[..self.count].iter().all(|r| *r <= tol) {
                let values = theta[..self.count].to_vec();
                if values.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::LinearAlgebra("operator is not positive definite".into()));
                }
                return Ok(values);
            }
            last_residuals = residuals[..self.count.min(nk)].to_vec();
            let wanted: Vec<usize> = (0..nk).filter(|&i| residuals[i] > tol).collect();
            if m + wanted.len() > self.max_basis {
                for c in 0..nk {
                    self.v.col_mut(c).copy_from(u.col(c));
                    self.av.col_mut(c).copy_from(au.col(c));
                }
                for r in 0..self.max_basis {
                    for c in 0..self.max_basis {
                        self.h[(r, c)] = 0.0;
                    }
                }
                for c in 0..nk {
                    self.h[(c, c)] = theta[c];
                }
                self.m = nk;
            }
            let mut w = Mat::<f64>::zeros(n, wanted.len());
            for (c, &i) in wanted.iter().enumerate() {
                w.col_mut(c).copy_from(u.col(i));
            }
            self.llt.solve_in_place(w.as_mut());
            if self.extend(w) == 0 {
                let fresh = self.random_block(1);
                if self.extend(fresh) == 0 {
                    return Err(Error::Convergence {
                        iterations: iteration + 1,
                        worst_residual: last_residuals.iter().copied().fold(0.0, f64::max),
                        residuals: last_residuals,
                    });
                }
            }
        }
        Err(Error::Convergence {
            iterations: self.opts.max_iterations,
            worst_residual: last_residuals.iter().copied().fold(0.0, f64::max),
            residuals: last_residuals,
        })
    }
}
