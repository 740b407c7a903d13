//! Dirichlet-type boundary data for the trace and flux unknowns.

use crate::model::ModelProblem;
use crate::system::WeakField;
use crate::weakops::{project_edge_flux, project_edge_value, WgSpace};

/// Sets `v_b = Q_b ξ` and `v_g = Q_g ν` on every boundary edge; other DOFs are untouched.
/// Boundary edge normals point out of the domain, so `ν = κ∇g·n_e`.
pub fn apply_boundary(mut field: WeakField, space: &WgSpace<'_>, problem: &ModelProblem) -> WeakField {
    let mesh = space.mesh;
    let g = &problem.boundary;
    let deg = g.degree().max(0) as usize;
    for (e, edge) in mesh.edges.iter().enumerate().filter(|(_, e)| e.boundary) {
        let vb = project_edge_value(mesh, e, space.k, |x, y| g.eval(x, y), deg);
        field.coeffs[space.dofs.trace(e)].copy_from_slice(&vb);
        let kappa = problem.coefficients.kappa(edge.elements[0]);
        let vg = project_edge_flux(mesh, e, space.k, &kappa, g);
        field.coeffs[space.dofs.flux(e)].copy_from_slice(&vg);
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::gen_triangular;
    use crate::poly::{bubble_solution, KappaMatrix, Poly2};
    use crate::weakops::{edge_basis, LiftDegrees};

    fn setup(g: Poly2) -> (crate::mesh::PolytopalMesh, ModelProblem) {
        let mesh = gen_triangular(2).unwrap();
        let mut problem = ModelProblem::homogeneous(KappaMatrix::isotropic(2.0), 1.0).unwrap();
        problem.boundary = g;
        (mesh, problem)
    }

    #[test]
    fn homogeneous_data_gives_zero() {
        let (mesh, problem) = setup(bubble_solution());
        let space = WgSpace::new(&mesh, 2, &problem.coefficients, LiftDegrees::default()).unwrap();
        let mut start = WeakField::zeros(&space.dofs);
        start.coeffs.iter_mut().for_each(|c| *c = 7.0);
        let f = apply_boundary(start, &space, &problem);
        for (i, c) in f.coeffs.iter().enumerate() {
            if space.dofs.boundary[i] {
                assert!(c.abs() < 1e-15);
            } else {
                assert_eq!(*c, 7.0);
            }
        }
    }

    #[test]
    fn constant_and_linear_data() {
        let (mesh, problem) = setup(Poly2::constant(1.0));
        let space = WgSpace::new(&mesh, 2, &problem.coefficients, LiftDegrees::default()).unwrap();
        let f = apply_boundary(WeakField::zeros(&space.dofs), &space, &problem);
        for (e, edge) in mesh.edges.iter().enumerate().filter(|(_, e)| e.boundary) {
            assert!((f.coeffs[space.dofs.trace(e)][0] - edge.length.sqrt()).abs() < 1e-14);
            assert!(f.coeffs[space.dofs.flux(e)].iter().all(|c| c.abs() < 1e-14));
        }

        let (mesh, problem) = setup(Poly2::x());
        let space = WgSpace::new(&mesh, 2, &problem.coefficients, LiftDegrees::default()).unwrap();
        let f = apply_boundary(WeakField::zeros(&space.dofs), &space, &problem);
        for (e, edge) in mesh.edges.iter().enumerate().filter(|(_, e)| e.boundary) {
            let [a, b] = mesh.edge_endpoints(e);
            if a[1] == 0.0 && b[1] == 0.0 {
                let vb = f.coeffs[space.dofs.trace(e)].to_vec();
                let params = [-1.0, -0.3, 0.5, 1.0];
                let vals = edge_basis(&params, 2, edge.length) * nalgebra::DVector::from_vec(vb);
                for (t, v) in params.iter().zip(vals.iter()) {
                    let x = a[0] + (t + 1.0) / 2.0 * (b[0] - a[0]);
                    assert!((v - x).abs() < 1e-14);
                }
                // κ∇x·n = 2 n_x = 0 on the bottom side
                assert!(f.coeffs[space.dofs.flux(e)].iter().all(|c| c.abs() < 1e-14));
            }
        }
    }
}
