//! Local weak Galerkin machinery: DOF layout, orthonormal bases, and the discrete weak
//! elliptic operator `E_w` and weak gradient `∇_w` as matrices over local weak DOFs.

mod basis;
mod element;
mod project;
mod space;

pub use basis::{edge_basis, weighted_gram, BasisTable, OrthoBasis};
pub use element::{
    local_stiffness, weak_elliptic_lift, weak_gradient_lift, EdgeContext, ElementContext, ElementOperator,
    LiftingTables,
};
pub use project::{project_edge_flux, project_edge_value, project_element, project_qh};
pub use space::WgSpace;

use crate::error::{Error, Result};
use crate::poly::dim_p;

/// Ordering of one element's weak DOFs: the interior block (`v₀ ∈ P_k(T)`), then one
/// `v_b ∈ P_k(e)` block per edge, then one `v_g ∈ P_{k-1}(e)` block per edge, with edges in
/// element-local order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalDofLayout {
    pub k: usize,
    pub num_edges: usize,
}

impl LocalDofLayout {
    pub fn new(k: usize, num_edges: usize) -> Self {
        Self { k, num_edges }
    }

    pub fn interior_dim(&self) -> usize {
        dim_p(self.k)
    }

    pub fn trace_dim(&self) -> usize {
        self.k + 1
    }

    pub fn flux_dim(&self) -> usize {
        self.k
    }

    pub fn trace_offset(&self, local_edge: usize) -> usize {
        self.interior_dim() + local_edge * self.trace_dim()
    }

    pub fn flux_offset(&self, local_edge: usize) -> usize {
        self.interior_dim() + self.num_edges * self.trace_dim() + local_edge * self.flux_dim()
    }

    /// Local DOF count `m = (k+1)(k+2)/2 + N(2k+1)`.
    pub fn total(&self) -> usize {
        self.interior_dim() + self.num_edges * (2 * self.k + 1)
    }
}

/// Polynomial degrees `r1` (for `E_w`) and `r2` (for `∇_w`).
///
/// Unset degrees default to `r1 = k + 4` and `r2 = k + 2` on every element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LiftDegrees {
    pub r1: Option<usize>,
    pub r2: Option<usize>,
}

impl LiftDegrees {
    pub fn fixed(r1: usize, r2: usize) -> Self {
        Self { r1: Some(r1), r2: Some(r2) }
    }

    pub fn check(&self, k: usize) -> Result<()> {
        if let Some(r1) = self.r1 {
            if r1 < k {
                return Err(Error::Config(format!("r1 = {r1} must be at least k = {k}")));
            }
        }
        if let Some(r2) = self.r2 {
            if r2 + 1 < k {
                return Err(Error::Config(format!("r2 = {r2} must be at least k - 1 = {}", k - 1)));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, k: usize) -> (usize, usize) {
        (self.r1.unwrap_or(k + 4), self.r2.unwrap_or(k + 2))
    }
}
