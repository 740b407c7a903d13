//! Global assembly with boundary elimination and optional static condensation.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::boundary::apply_boundary;
use super::sparse::CscMatrix;
use super::WeakField;
use crate::error::{Error, Result};
use crate::model::ModelProblem;
use crate::poly::Poly2;
use crate::quadrature::polygon_rule;
use crate::weakops::{weighted_gram, WgSpace};

/// Per-element data needed to recover condensed interior unknowns: `u_I = z − Z u_B`.
#[derive(Debug, Clone)]
pub struct InteriorRecovery {
    pub element: usize,
    /// Global indices of the element's interior DOFs.
    pub interior: Vec<usize>,
    /// Global indices of the element's edge DOFs in local order.
    pub edges: Vec<usize>,
    pub z: DVector<f64>,
    pub z_mat: DMatrix<f64>,
}

/// Linear system over the unknown DOFs plus what is needed to rebuild a full weak field.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: CscMatrix,
    pub rhs: Vec<f64>,
    /// Global DOF index of every unknown, in system order.
    pub unknowns: Vec<usize>,
    /// Boundary values on masked DOFs, zero elsewhere.
    pub lifted: WeakField,
    /// Present when element-interior DOFs were condensed out.
    pub recovery: Option<Vec<InteriorRecovery>>,
}

impl AssembledSystem {
    pub fn dim(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_condensed(&self) -> bool {
        self.recovery.is_some()
    }

    /// Full weak field from a solution of the system.
    pub fn expand(&self, x: &[f64]) -> WeakField {
        assert_eq!(x.len(), self.dim());
        let mut field = self.lifted.clone();
        for (&g, &v) in self.unknowns.iter().zip(x) {
            field.coeffs[g] = v;
        }
        if let Some(rec) = &self.recovery {
            for r in rec {
                let ub = DVector::from_vec(field.gather(&r.edges));
                let ui = &r.z - &r.z_mat * ub;
                for (&g, v) in r.interior.iter().zip(ui.iter()) {
                    field.coeffs[g] = *v;
                }
            }
        }
        field
    }
}

/// `(f, χ_i)_T` for the element's orthonormal `P_k` basis, with quadrature exact for `f`.
pub fn element_load(space: &WgSpace<'_>, t: usize, f: &Poly2) -> Result<DVector<f64>> {
    let basis = &space.ops[t].basis;
    if f.is_zero() {
        return Ok(DVector::zeros(basis.dim()));
    }
    let rule = polygon_rule(&space.mesh.element_coords(t), f.degree() as usize + space.k)?;
    let tab = basis.tabulate(&rule.points, basis.dim(), 0);
    let vals = DMatrix::from_iterator(rule.len(), 1, rule.points.iter().map(|p| f.eval(p[0], p[1])));
    Ok(DVector::from_column_slice(weighted_gram(&tab.values, &rule.weights, &vals).as_slice()))
}

struct LocalContribution {
    indices: Vec<usize>,
    matrix: DMatrix<f64>,
    load: DVector<f64>,
    recovery: Option<InteriorRecovery>,
}

fn condense(t: usize, indices: Vec<usize>, nk: usize, k: DMatrix<f64>, load: DVector<f64>) -> Result<LocalContribution> {
    let m = indices.len();
    let nb = m - nk;
    let kii = k.view((0, 0), (nk, nk)).into_owned();
    let kib = k.view((0, nk), (nk, nb)).into_owned();
    let kbi = k.view((nk, 0), (nb, nk));
    let kbb = k.view((nk, nk), (nb, nb));
    let chol = kii
        .cholesky()
        .ok_or_else(|| Error::Solver(format!("interior block of element {t} is not positive definite")))?;
    let z_mat = chol.solve(&kib);
    let z = chol.solve(&load.rows(0, nk).into_owned());
    let schur = kbb - kbi * &z_mat;
    let rhs = load.rows(nk, nb) - kbi * &z;
    Ok(LocalContribution {
        indices: indices[nk..].to_vec(),
        matrix: schur,
        load: rhs,
        recovery: Some(InteriorRecovery { element: t, interior: indices[..nk].to_vec(), edges: indices[nk..].to_vec(), z, z_mat }),
    })
}

/// Assembles the global system. Boundary DOFs take their values from the problem data and
/// are eliminated into the right-hand side; with `condense` the element-interior DOFs are
/// also eliminated element by element.
///
/// Local matrices are computed in parallel; the reduction into the global matrix runs in
/// element order, so the result does not depend on the thread count.
pub fn assemble(space: &WgSpace<'_>, problem: &ModelProblem, condense_interior: bool) -> Result<AssembledSystem> {
    let mesh = space.mesh;
    let dofs = &space.dofs;
    let lifted = apply_boundary(WeakField::zeros(dofs), space, problem);
    let coefficients = &problem.coefficients;
    let nk = crate::poly::dim_p(space.k);

    let locals = (0..mesh.num_elements())
        .into_par_iter()
        .map(|t| {
            let indices = space.local_indices(t);
            let k = space.ops[t].stiffness(&coefficients.kappa(t), coefficients.mu(t));
            let mut load = DVector::zeros(indices.len());
            load.rows_mut(0, nk).copy_from(&element_load(space, t, &problem.source)?);
            if condense_interior {
                condense(t, indices, nk, k, load)
            } else {
                Ok(LocalContribution { indices, matrix: k, load, recovery: None })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let is_unknown = |g: usize| !dofs.boundary[g] && (!condense_interior || dofs.is_edge_dof(g));
    let mut system_index = vec![usize::MAX; dofs.total()];
    let mut unknowns = Vec::new();
    for g in 0..dofs.total() {
        if is_unknown(g) {
            system_index[g] = unknowns.len();
            unknowns.push(g);
        }
    }

    let mut rhs = vec![0.0; unknowns.len()];
    let mut triplets = Vec::with_capacity(locals.iter().map(|l| l.indices.len().pow(2)).sum());
    let mut recovery = condense_interior.then(Vec::new);
    for local in locals {
        for (a, &ga) in local.indices.iter().enumerate() {
            let ia = system_index[ga];
            if ia == usize::MAX {
                continue;
            }
            rhs[ia] += local.load[a];
            for (b, &gb) in local.indices.iter().enumerate() {
                let ib = system_index[gb];
                if ib == usize::MAX {
                    rhs[ia] -= local.matrix[(a, b)] * lifted.coeffs[gb];
                } else {
                    triplets.push((ia, ib, local.matrix[(a, b)]));
                }
            }
        }
        if let (Some(all), Some(r)) = (recovery.as_mut(), local.recovery) {
            all.push(r);
        }
    }

    Ok(AssembledSystem {
        matrix: CscMatrix::from_triplets(unknowns.len(), triplets),
        rhs,
        unknowns,
        lifted,
        recovery,
    })
}
