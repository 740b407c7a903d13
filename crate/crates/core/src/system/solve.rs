//! Linear solvers for the assembled system.

use std::fmt;
use std::str::FromStr;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::LltError;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Par, Side};

use super::assemble::AssembledSystem;
use super::sparse::CscMatrix;
use super::WeakField;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    Direct,
    Cg,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Direct => "direct",
            SolverKind::Cg => "cg",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SolverKind::Direct),
            "cg" => Ok(SolverKind::Cg),
            _ => Err(Error::Config(format!("unknown solver '{s}' (expected direct or cg)"))),
        }
    }
}

pub const CG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final `‖b − Ax‖ / ‖b‖` (zero for a zero right-hand side).
    pub relative_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub field: WeakField,
    pub stats: SolveStats,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn relative_residual(a: &CscMatrix, x: &[f64], b: &[f64]) -> f64 {
    let bn = norm(b);
    if bn == 0.0 {
        return norm(x);
    }
    let ax = a.mul_vec(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    norm(&r) / bn
}

/// Sparse Cholesky factorization of a symmetric positive definite matrix; only the upper
/// triangle is read.
pub struct Cholesky {
    llt: faer::sparse::linalg::solvers::Llt<usize, f64>,
    n: usize,
}

impl fmt::Debug for Cholesky {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cholesky").field("n", &self.n).finish_non_exhaustive()
    }
}

impl Cholesky {
    pub fn factor(a: &CscMatrix) -> Result<Self> {
        faer::set_global_parallelism(Par::Seq);
        let n = a.dim();
        let upper: Vec<_> = a.entries().filter(|(r, c, _)| r <= c).map(|(r, c, v)| Triplet::new(r, c, v)).collect();
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &upper)
            .map_err(|e| Error::Solver(format!("cannot build sparse matrix: {e:?}")))?;
        let llt = mat.sp_cholesky(Side::Upper).map_err(|e| match e {
            LltError::Numeric(faer::linalg::cholesky::llt::factor::LltError::NonPositivePivot { index }) => {
                Error::Solver(format!("Cholesky breakdown: non-positive pivot at elimination step {index} of {n}"))
            }
            other => Error::Solver(format!("Cholesky failed: {other:?}")),
        })?;
        Ok(Self { llt, n })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        self.llt.solve_in_place(rhs.as_mut());
        (0..self.n).map(|i| rhs[(i, 0)]).collect()
    }
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess, stopping at relative
/// residual `tol` or failing after `max_iter` iterations.
pub fn conjugate_gradient(a: &CscMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.dim();
    let mut x = vec![0.0; n];
    let bn = norm(b);
    if bn == 0.0 {
        return Ok((x, SolveStats { iterations: 0, relative_residual: 0.0 }));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut res = 1.0;
    for it in 1..=max_iter {
        let ap = a.mul_vec(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::Solver(format!("conjugate gradients broke down at iteration {it} (pᵀAp = {pap:e})")));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res = norm(&r) / bn;
        if res <= tol {
            return Ok((x, SolveStats { iterations: it, relative_residual: res }));
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Solver(format!(
        "conjugate gradients did not converge in {max_iter} iterations (relative residual {res:e})"
    )))
}

/// Solves `A x = b` for the unknown DOFs of an assembled system.
pub fn solve_linear(a: &CscMatrix, b: &[f64], kind: SolverKind) -> Result<(Vec<f64>, SolveStats)> {
    if a.dim() == 0 {
        return Ok((Vec::new(), SolveStats { iterations: 0, relative_residual: 0.0 }));
    }
    match kind {
        SolverKind::Direct => {
            let x = Cholesky::factor(a)?.solve(b);
            let relative_residual = relative_residual(a, &x, b);
            Ok((x, SolveStats { iterations: 1, relative_residual }))
        }
        SolverKind::Cg => conjugate_gradient(a, b, CG_TOLERANCE, 10 * a.dim()),
    }
}

/// Solves the system and returns the full weak field with boundary and condensed values
/// filled in.
pub fn solve(system: &AssembledSystem, kind: SolverKind) -> Result<Solution> {
    let (x, stats) = solve_linear(&system.matrix, &system.rhs, kind)?;
    Ok(Solution { field: system.expand(&x), stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let a = CscMatrix::from_triplets(1, vec![(0, 0, 2.0)]);
        for kind in [SolverKind::Direct, SolverKind::Cg] {
            let (x, _) = solve_linear(&a, &[4.0], kind).unwrap();
            assert!((x[0] - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_rhs_needs_no_iterations() {
        let a = CscMatrix::from_triplets(2, vec![(0, 0, 2.0), (1, 1, 3.0), (0, 1, 1.0), (1, 0, 1.0)]);
        let (x, stats) = solve_linear(&a, &[0.0, 0.0], SolverKind::Cg).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(stats.iterations, 0);
    }

    #[test]
    fn indefinite_matrix_reports_pivot() {
        let a = CscMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 1, 1.0), (0, 1, 2.0), (1, 0, 2.0)]);
        let err = Cholesky::factor(&a).unwrap_err();
        assert!(matches!(err, Error::Solver(ref m) if m.contains("non-positive pivot")), "{err}");
    }

    #[test]
    fn cg_reports_non_convergence() {
        let n = 30;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 + i as f64));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = CscMatrix::from_triplets(n, t);
        let b = vec![1.0; n];
        let err = conjugate_gradient(&a, &b, 1e-14, 2).unwrap_err();
        assert!(err.to_string().contains("relative residual"));
        let (x, _) = conjugate_gradient(&a, &b, 1e-12, 10 * n).unwrap();
        let y = Cholesky::factor(&a).unwrap().solve(&b);
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-10));
    }

    #[test]
    fn solver_names_round_trip() {
        for k in [SolverKind::Direct, SolverKind::Cg] {
            assert_eq!(k.to_string().parse::<SolverKind>().unwrap(), k);
        }
        assert!("lu".parse::<SolverKind>().is_err());
    }
}
