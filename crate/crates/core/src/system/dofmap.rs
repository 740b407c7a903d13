use std::ops::Range;

use crate::mesh::PolytopalMesh;
use crate::poly::dim_p;

/// Global numbering of weak DOFs: every element-interior block (element order), then every
/// `v_b` block (edge order), then every `v_g` block (edge order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    pub k: usize,
    num_elements: usize,
    num_edges: usize,
    trace_start: usize,
    flux_start: usize,
    total: usize,
    /// True for `v_b`/`v_g` DOFs of boundary edges.
    pub boundary: Vec<bool>,
}

pub fn build_dofmap(mesh: &PolytopalMesh, k: usize) -> DofMap {
    let (ne, nt) = (mesh.num_edges(), mesh.num_elements());
    let trace_start = nt * dim_p(k);
    let flux_start = trace_start + ne * (k + 1);
    let total = flux_start + ne * k;
    let mut boundary = vec![false; total];
    for (e, edge) in mesh.edges.iter().enumerate() {
        if edge.boundary {
            for i in trace_start + e * (k + 1)..trace_start + (e + 1) * (k + 1) {
                boundary[i] = true;
            }
            for i in flux_start + e * k..flux_start + (e + 1) * k {
                boundary[i] = true;
            }
        }
    }
    DofMap { k, num_elements: nt, num_edges: ne, trace_start, flux_start, total, boundary }
}

impl DofMap {
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn interior(&self, t: usize) -> Range<usize> {
        let n = dim_p(self.k);
        t * n..(t + 1) * n
    }

    pub fn trace(&self, e: usize) -> Range<usize> {
        let n = self.k + 1;
        self.trace_start + e * n..self.trace_start + (e + 1) * n
    }

    pub fn flux(&self, e: usize) -> Range<usize> {
        let n = self.k;
        self.flux_start + e * n..self.flux_start + (e + 1) * n
    }

    pub fn num_boundary(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    pub fn is_edge_dof(&self, i: usize) -> bool {
        i >= self.trace_start
    }

    /// Global indices of an element's local DOFs in local layout order.
    pub fn local_indices(&self, mesh: &PolytopalMesh, t: usize) -> Vec<usize> {
        let el = &mesh.elements[t];
        let mut idx: Vec<usize> = self.interior(t).collect();
        for r in &el.edges {
            idx.extend(self.trace(r.edge));
        }
        for r in &el.edges {
            idx.extend(self.flux(r.edge));
        }
        idx
    }
}

/// Coefficient vector over all global weak DOFs. `v_g` coefficients represent the flux
/// against the global edge normal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakField {
    pub coeffs: Vec<f64>,
}

impl WeakField {
    pub fn zeros(dofs: &DofMap) -> Self {
        Self { coeffs: vec![0.0; dofs.total()] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn gather(&self, indices: &[usize]) -> Vec<f64> {
        indices.iter().map(|&i| self.coeffs[i]).collect()
    }

    pub fn sub(&self, other: &WeakField) -> WeakField {
        WeakField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }
}
