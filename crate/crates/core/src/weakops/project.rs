//! L² projections `Q_0`, `Q_b`, `Q_g` and the weak interpolant `Q_h u`.

use nalgebra::DMatrix;

use super::basis::{edge_basis, weighted_gram};
use super::WgSpace;
use crate::error::Result;
use crate::mesh::PolytopalMesh;
use crate::model::Coefficients;
use crate::poly::{KappaMatrix, Poly2};
use crate::quadrature::{edge_rule, polygon_rule};
use crate::system::WeakField;

fn column(vals: Vec<f64>) -> DMatrix<f64> {
    let n = vals.len();
    DMatrix::from_vec(n, 1, vals)
}

/// Coefficients of `Q_0 f` in the element's orthonormal `P_k` basis; `data_degree` is the
/// polynomial degree of `f` (or the degree to integrate for non-polynomial `f`).
pub fn project_element(
    space: &WgSpace<'_>,
    t: usize,
    f: impl Fn(f64, f64) -> f64,
    data_degree: usize,
) -> Result<Vec<f64>> {
    let k = space.k;
    let rule = polygon_rule(&space.mesh.element_coords(t), (data_degree + k).max(2 * k))?;
    let basis = &space.ops[t].basis;
    let tab = basis.tabulate(&rule.points, basis.dim(), 0);
    let vals = column(rule.points.iter().map(|p| f(p[0], p[1])).collect());
    Ok(weighted_gram(&tab.values, &rule.weights, &vals).as_slice().to_vec())
}

/// Coefficients of `Q_b f` on edge `e` in the orthonormal Legendre basis of `P_k(e)`.
pub fn project_edge_value(
    mesh: &PolytopalMesh,
    e: usize,
    k: usize,
    f: impl Fn(f64, f64) -> f64,
    data_degree: usize,
) -> Vec<f64> {
    let [p, q] = mesh.edge_endpoints(e);
    let rule = edge_rule(p, q, (data_degree + k).max(2 * k));
    let b = edge_basis(&rule.params, k, mesh.edges[e].length);
    let vals = column(rule.rule.points.iter().map(|x| f(x[0], x[1])).collect());
    weighted_gram(&b, &rule.rule.weights, &vals).as_slice().to_vec()
}

/// Coefficients of `Q_g(κ∇u·n_e)` on edge `e` in the orthonormal basis of `P_{k-1}(e)`,
/// measured against the global edge normal.
pub fn project_edge_flux(mesh: &PolytopalMesh, e: usize, k: usize, kappa: &KappaMatrix, u: &Poly2) -> Vec<f64> {
    let n = mesh.edges[e].normal;
    let kn = kappa.apply(n);
    let ux = u.diff(crate::poly::Axis::X);
    let uy = u.diff(crate::poly::Axis::Y);
    let deg = u.degree().max(1) as usize - 1;
    let [p, q] = mesh.edge_endpoints(e);
    let rule = edge_rule(p, q, deg + k);
    let b = edge_basis(&rule.params, k - 1, mesh.edges[e].length);
    let vals = column(rule.rule.points.iter().map(|x| kn[0] * ux.eval(x[0], x[1]) + kn[1] * uy.eval(x[0], x[1])).collect());
    weighted_gram(&b, &rule.rule.weights, &vals).as_slice().to_vec()
}

/// `Q_h u = {Q_0 u, Q_b u, Q_g(κ∇u·n)}` over the whole mesh. On each edge the flux uses
/// `κ` of the first adjacent element.
pub fn project_qh(space: &WgSpace<'_>, coefficients: &Coefficients, u: &Poly2) -> Result<WeakField> {
    let mesh = space.mesh;
    let k = space.k;
    let deg = u.degree().max(0) as usize;
    let mut field = WeakField::zeros(&space.dofs);
    for t in 0..mesh.num_elements() {
        let c = project_element(space, t, |x, y| u.eval(x, y), deg)?;
        field.coeffs[space.dofs.interior(t)].copy_from_slice(&c);
    }
    for (e, edge) in mesh.edges.iter().enumerate() {
        let vb = project_edge_value(mesh, e, k, |x, y| u.eval(x, y), deg);
        field.coeffs[space.dofs.trace(e)].copy_from_slice(&vb);
        let vg = project_edge_flux(mesh, e, k, &coefficients.kappa(edge.elements[0]), u);
        field.coeffs[space.dofs.flux(e)].copy_from_slice(&vg);
    }
    Ok(field)
}
