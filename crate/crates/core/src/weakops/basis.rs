//! Element and edge bases orthonormal in L².
//!
//! Element bases are generated by a Gram–Schmidt/Arnoldi recurrence: the function for the
//! monomial `x^a y^b` is obtained by multiplying the function of its parent (`x^(a-1) y^b`
//! or `y^(b-1)`) by a scaled coordinate and orthogonalizing against everything before it.
//! The recurrence coefficients are kept, so values and derivatives can be evaluated at any
//! point without passing through ill-conditioned monomial coefficients. Because the
//! ordering is graded, the first `dim P_r` functions span `P_r(T)` for every `r`.

use nalgebra::DMatrix;

use crate::mesh::Point;
use crate::poly::{dim_p, monomial_exponents, monomial_index};
use crate::quadrature::QuadRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    X,
    Y,
}

/// An L²(T)-orthonormal basis of `P_degree(T)`.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    center: Point,
    scale: f64,
    degree: usize,
    parents: Vec<(usize, Dir)>,
    /// `coeffs[j][i]`, `i < j`: projection coefficients removed from the parent product;
    /// `coeffs[j][j]`: normalization.
    coeffs: Vec<Vec<f64>>,
}

/// Basis values (and optionally derivatives) at a point set; rows are points.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub values: DMatrix<f64>,
    pub dx: DMatrix<f64>,
    pub dy: DMatrix<f64>,
    pub dxx: DMatrix<f64>,
    pub dxy: DMatrix<f64>,
    pub dyy: DMatrix<f64>,
}

impl OrthoBasis {
    /// Orthonormalizes scaled monomials `((x - x_T)/h_T)^a ((y - y_T)/h_T)^b` under `rule`,
    /// which must integrate polynomials of degree `2 * degree` exactly.
    pub fn new(center: Point, scale: f64, degree: usize, rule: &QuadRule) -> Self {
        debug_assert!(rule.exactness >= 2 * degree);
        let npts = rule.len();
        let n = dim_p(degree);
        let sx: Vec<f64> = rule.points.iter().map(|p| (p[0] - center[0]) / scale).collect();
        let sy: Vec<f64> = rule.points.iter().map(|p| (p[1] - center[1]) / scale).collect();
        let w = &rule.weights;
        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).zip(w).map(|((x, y), w)| x * y * w).sum() };

        let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut parents = Vec::with_capacity(n);
        let mut coeffs = Vec::with_capacity(n);

        let norm0 = rule.measure().sqrt();
        q.push(vec![1.0 / norm0; npts]);
        parents.push((0, Dir::X));
        coeffs.push(vec![norm0]);

        for j in 1..n {
            let (a, b) = monomial_exponents(j);
            let (parent, dir) = if a > 0 { (monomial_index(a - 1, b), Dir::X) } else { (monomial_index(0, b - 1), Dir::Y) };
            let s = if dir == Dir::X { &sx } else { &sy };
            let mut v: Vec<f64> = q[parent].iter().zip(s).map(|(qp, s)| qp * s).collect();
            let mut h = vec![0.0; j + 1];
            for _pass in 0..2 {
                for (i, qi) in q.iter().enumerate() {
                    let c = dot(qi, &v);
                    h[i] += c;
                    for (vk, qk) in v.iter_mut().zip(qi) {
                        *vk -= c * qk;
                    }
                }
            }
            let nrm = dot(&v, &v).sqrt();
            h[j] = nrm;
            for vk in v.iter_mut() {
                *vk /= nrm;
            }
            q.push(v);
            parents.push((parent, dir));
            coeffs.push(h);
        }

        Self { center, scale, degree, parents, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Restriction to the first `dim P_degree` functions.
    pub fn truncated(&self, degree: usize) -> Self {
        assert!(degree <= self.degree);
        let n = dim_p(degree);
        Self {
            center: self.center,
            scale: self.scale,
            degree,
            parents: self.parents[..n].to_vec(),
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Evaluates the first `n` basis functions at `points` together with derivatives up to
    /// `order` (0, 1 or 2). Unrequested derivative tables are left empty (0 columns).
    pub fn tabulate(&self, points: &[Point], n: usize, order: usize) -> BasisTable {
        assert!(n <= self.dim());
        let npts = points.len();
        let inv = 1.0 / self.scale;
        let sx: Vec<f64> = points.iter().map(|p| (p[0] - self.center[0]) * inv).collect();
        let sy: Vec<f64> = points.iter().map(|p| (p[1] - self.center[1]) * inv).collect();

        let nq = [1, 3, 6][order.min(2)];
        // buffers[d] holds column-major values of derivative d: 0=val,1=dx,2=dy,3=dxx,4=dxy,5=dyy
        let mut buf: Vec<Vec<f64>> = (0..nq).map(|_| vec![0.0; npts * n]).collect();
        for p in 0..npts {
            buf[0][p] = 1.0 / self.coeffs[0][0];
        }

        let mut v = vec![0.0; npts];
        for j in 1..n {
            let (parent, dir) = self.parents[j];
            let h = &self.coeffs[j];
            let s = if dir == Dir::X { &sx } else { &sy };
            for d in 0..nq {
                // product rule: ds/dx = inv for X, ds/dy = inv for Y
                let col = &buf[d][parent * npts..(parent + 1) * npts];
                for p in 0..npts {
                    v[p] = s[p] * col[p];
                }
                let extra = match (d, dir) {
                    (1, Dir::X) | (2, Dir::Y) => Some((0, 1.0)),
                    (3, Dir::X) => Some((1, 2.0)),
                    (4, Dir::X) => Some((2, 1.0)),
                    (4, Dir::Y) => Some((1, 1.0)),
                    (5, Dir::Y) => Some((2, 2.0)),
                    _ => None,
                };
                if let Some((src, mult)) = extra {
                    let f = mult * inv;
                    let col = &buf[src][parent * npts..(parent + 1) * npts];
                    for p in 0..npts {
                        v[p] += f * col[p];
                    }
                }
                for (i, &c) in h[..j].iter().enumerate() {
                    let qi = &buf[d][i * npts..(i + 1) * npts];
                    for p in 0..npts {
                        v[p] -= c * qi[p];
                    }
                }
                let inv_norm = 1.0 / h[j];
                for (o, vp) in buf[d][j * npts..(j + 1) * npts].iter_mut().zip(&v) {
                    *o = vp * inv_norm;
                }
            }
        }

        let mut mats = buf.into_iter().map(|b| DMatrix::from_vec(npts, n, b));
        let empty = || DMatrix::zeros(npts, 0);
        let values = mats.next().unwrap();
        let dx = mats.next().unwrap_or_else(empty);
        let dy = mats.next().unwrap_or_else(empty);
        let dxx = mats.next().unwrap_or_else(empty);
        let dxy = mats.next().unwrap_or_else(empty);
        let dyy = mats.next().unwrap_or_else(empty);
        BasisTable { values, dx, dy, dxx, dxy, dyy }
    }
}

/// Orthonormal Legendre basis of `P_degree(e)` on an edge of the given length, in the chordal
/// parameter `t ∈ [-1, 1]`; returns a `params.len() × (degree + 1)` table.
pub fn edge_basis(params: &[f64], degree: usize, length: f64) -> DMatrix<f64> {
    let n = degree + 1;
    let mut m = DMatrix::zeros(params.len(), n);
    for (row, &t) in params.iter().enumerate() {
        let (mut p0, mut p1) = (1.0, t);
        for j in 0..n {
            let pj = match j {
                0 => 1.0,
                1 => t,
                _ => {
                    let p2 = ((2 * j - 1) as f64 * t * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                    p2
                }
            };
            m[(row, j)] = pj * ((2 * j + 1) as f64 / length).sqrt();
        }
    }
    m
}

/// `aᵀ diag(w) b`
pub fn weighted_gram(a: &DMatrix<f64>, w: &[f64], b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut bw = b.clone();
    for (mut row, &wi) in bw.row_iter_mut().zip(w) {
        row *= wi;
    }
    a.tr_mul(&bw)
}
