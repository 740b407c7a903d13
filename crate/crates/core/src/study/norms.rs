use nalgebra::DVector;
use rayon::prelude::*;

use crate::model::Coefficients;
use crate::poly::dim_p;
use crate::quadrature::{edge_rule, polygon_rule};
use crate::system::WeakField;
use crate::weakops::{edge_basis, WgSpace};

/// The three error measures of a discrete solution against `Q_h u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `‖Q_0 u − u_0‖`
    pub l2: f64,
    /// `‖∇_w(Q_h u − u_h)‖`
    pub grad: f64,
    /// `‖E_w(Q_h u − u_h)‖`
    pub ell: f64,
}

impl ErrorNorms {
    pub fn as_array(&self) -> [f64; 3] {
        [self.l2, self.grad, self.ell]
    }
}

/// Error norms of `d = projected − solution`. Orthonormal bases reduce every element term
/// to a Euclidean norm of lift coefficients.
pub fn error_norms(space: &WgSpace<'_>, projected: &WeakField, solution: &WeakField) -> ErrorNorms {
    let d = projected.sub(solution);
    let parts: Vec<[f64; 3]> = (0..space.mesh.num_elements())
        .into_par_iter()
        .map(|t| {
            let local = DVector::from_vec(d.gather(&space.local_indices(t)));
            let op = &space.ops[t];
            let nk = op.layout.interior_dim();
            [local.rows(0, nk).norm_squared(), (&op.tables.cg * &local).norm_squared(), (&op.tables.ce * &local).norm_squared()]
        })
        .collect();
    let sum = |i: usize| parts.iter().map(|p| p[i]).sum::<f64>().sqrt();
    ErrorNorms { l2: sum(0), grad: sum(1), ell: sum(2) }
}

/// `|||v|||² = Σ_T ‖E_w v‖² + 2μ(κ∇_w v, ∇_w v) + μ²‖v_0‖²`.
pub fn energy_norm(space: &WgSpace<'_>, coefficients: &Coefficients, v: &WeakField) -> f64 {
    let parts: Vec<f64> = (0..space.mesh.num_elements())
        .into_par_iter()
        .map(|t| space.ops[t].energy(&v.gather(&space.local_indices(t)), &coefficients.kappa(t), coefficients.mu(t)))
        .collect();
    parts.iter().sum::<f64>().sqrt()
}

/// Element and boundary terms of the discrete `H²` norm on one element.
fn h2_element(space: &WgSpace<'_>, coefficients: &Coefficients, v: &WeakField, t: usize) -> f64 {
    let mesh = space.mesh;
    let k = space.k;
    let el = &mesh.elements[t];
    let basis = &space.ops[t].basis;
    let kappa = coefficients.kappa(t);
    let mu = coefficients.mu(t);
    let v0 = DVector::from_vec(v.coeffs[space.dofs.interior(t)].to_vec());
    let n = dim_p(k);

    let rule = polygon_rule(&mesh.element_coords(t), 2 * k).expect("validated element");
    let tab = basis.tabulate(&rule.points, n, 2);
    let (vx, vy) = (&tab.dx * &v0, &tab.dy * &v0);
    let ev = (&tab.dxx * kappa.a + &tab.dxy * (2.0 * kappa.b) + &tab.dyy * kappa.c) * &v0;
    let mut total = 0.0;
    for (q, w) in rule.weights.iter().enumerate() {
        let g = [vx[q], vy[q]];
        let kg = kappa.apply(g);
        total += w * (ev[q].powi(2) + 2.0 * mu * (kg[0] * g[0] + kg[1] * g[1]));
    }
    total += mu * mu * v0.norm_squared();

    let h = el.diameter;
    for r in &el.edges {
        let edge = &mesh.edges[r.edge];
        let [p, q] = mesh.edge_endpoints(r.edge);
        let er = edge_rule(p, q, 2 * k);
        let sigma = r.sigma();
        let normal = [sigma * edge.normal[0], sigma * edge.normal[1]];
        let kn = kappa.apply(normal);
        let et = basis.tabulate(&er.rule.points, n, 1);
        let trace = edge_basis(&er.params, k, edge.length);
        let vb = &trace * DVector::from_vec(v.coeffs[space.dofs.trace(r.edge)].to_vec());
        let vg = trace.columns(0, k) * DVector::from_vec(v.coeffs[space.dofs.flux(r.edge)].to_vec()) * sigma;
        let val = &et.values * &v0;
        let flux = (&et.dx * kn[0] + &et.dy * kn[1]) * &v0;
        for (i, w) in er.rule.weights.iter().enumerate() {
            total += w * ((flux[i] - vg[i]).powi(2) / h + (val[i] - vb[i]).powi(2) / h.powi(3));
        }
    }
    total
}

/// Discrete `H²` norm with `h_T^{-1}` flux-jump and `h_T^{-3}` trace-jump terms.
pub fn discrete_h2_norm(space: &WgSpace<'_>, coefficients: &Coefficients, v: &WeakField) -> f64 {
    let parts: Vec<f64> = (0..space.mesh.num_elements())
        .into_par_iter()
        .map(|t| h2_element(space, coefficients, v, t))
        .collect();
    parts.iter().sum::<f64>().sqrt()
}
