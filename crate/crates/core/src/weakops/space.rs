use rayon::prelude::*;

use super::{ElementOperator, LiftDegrees};
use crate::error::{Error, Result};
use crate::mesh::PolytopalMesh;
use crate::model::Coefficients;
use crate::system::{build_dofmap, DofMap};

/// The global weak finite element space on a mesh with all per-element lifts precomputed.
#[derive(Debug, Clone)]
pub struct WgSpace<'m> {
    pub mesh: &'m PolytopalMesh,
    pub k: usize,
    pub degrees: LiftDegrees,
    pub dofs: DofMap,
    pub ops: Vec<ElementOperator>,
}

impl<'m> WgSpace<'m> {
    /// Builds every element's lifting tables; elements are processed in parallel and stored
    /// in element order.
    pub fn new(mesh: &'m PolytopalMesh, k: usize, coefficients: &Coefficients, degrees: LiftDegrees) -> Result<Self> {
        if k < 2 {
            return Err(Error::Config(format!("polynomial order k = {k} must be at least 2")));
        }
        degrees.check(k)?;
        if let Coefficients::PerElement(v) = coefficients {
            if v.len() != mesh.num_elements() {
                return Err(Error::Config(format!(
                    "{} coefficient pairs for {} elements",
                    v.len(),
                    mesh.num_elements()
                )));
            }
        }
        let ops = (0..mesh.num_elements())
            .into_par_iter()
            .map(|t| ElementOperator::build(mesh, t, k, &coefficients.kappa(t), &degrees))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { mesh, k, degrees, dofs: build_dofmap(mesh, k), ops })
    }

    pub fn local_indices(&self, t: usize) -> Vec<usize> {
        self.dofs.local_indices(self.mesh, t)
    }

    /// `(min, max)` of the `r1` and `r2` degrees actually used.
    pub fn degree_ranges(&self) -> ((usize, usize), (usize, usize)) {
        let r1 = self.ops.iter().map(|o| o.tables.r1);
        let r2 = self.ops.iter().map(|o| o.tables.r2);
        (
            (r1.clone().min().unwrap_or(0), r1.max().unwrap_or(0)),
            (r2.clone().min().unwrap_or(0), r2.max().unwrap_or(0)),
        )
    }
}
