//! Per-element lifting of weak functions.
//!
//! For a local weak function `v = {v₀, v_b, v_g}` the lifts are defined by moment identities
//! against orthonormal test polynomials:
//!
//! ```text
//! (E_w v, φ)_T = (E v₀, φ)_T + <v₀ − v_b, κ∇φ·n>_∂T − <κ∇v₀·n − v_g, φ>_∂T   φ ∈ P_r1(T)
//! (∇_w v, ψ)_T = (∇v₀, ψ)_T − <v₀ − v_b, ψ·n>_∂T                              ψ ∈ [P_r2(T)]²
//! ```
//!
//! With an orthonormal test basis the mass matrix is the identity, so each column of a lift
//! matrix is simply the vector of right-hand-side moments of one local DOF.

use nalgebra::DMatrix;

use super::basis::{edge_basis, weighted_gram, BasisTable, OrthoBasis};
use super::{LiftDegrees, LocalDofLayout};
use crate::error::{Error, Result};
use crate::mesh::{Point, PolytopalMesh};
use crate::poly::{dim_p, KappaMatrix};
use crate::quadrature::{edge_rule, polygon_rule, EdgeRule, QuadRule};

/// Quadrature data and basis tabulations of one edge seen from one element.
#[derive(Debug, Clone)]
pub struct EdgeContext {
    pub edge: usize,
    pub sigma: f64,
    /// Outward unit normal of the element on this edge, `σ(T,e) n_e`.
    pub normal: Point,
    pub rule: EdgeRule,
    /// Element basis (up to the maximal degree) with first derivatives at the edge points.
    pub phi: BasisTable,
    /// Orthonormal `P_k(e)` basis at the edge points.
    pub trace: DMatrix<f64>,
}

/// Everything needed to build the lifting tables of one element.
#[derive(Debug, Clone)]
pub struct ElementContext {
    pub element: usize,
    pub layout: LocalDofLayout,
    pub max_degree: usize,
    pub rule: QuadRule,
    pub basis: OrthoBasis,
    /// Element basis up to `max_degree` at the element points.
    pub values: DMatrix<f64>,
    /// `P_k` part of the basis with second derivatives at the element points.
    pub interior: BasisTable,
    pub edges: Vec<EdgeContext>,
}

impl ElementContext {
    /// Quadrature is exact to degree `2 * max_degree + 2`, enough for every product of two
    /// basis functions used by the lifts.
    pub fn new(mesh: &PolytopalMesh, t: usize, k: usize, max_degree: usize) -> Result<Self> {
        let el = &mesh.elements[t];
        let layout = LocalDofLayout::new(k, el.num_edges());
        let qdeg = 2 * max_degree + 2;
        let rule = polygon_rule(&mesh.element_coords(t), qdeg).map_err(|e| e.context(format!("element {t}")))?;
        let basis = OrthoBasis::new(el.barycenter, el.diameter, max_degree, &rule);
        let nmax = dim_p(max_degree);
        let values = basis.tabulate(&rule.points, nmax, 0).values;
        let interior = basis.tabulate(&rule.points, dim_p(k), 2);

        let edges = el
            .edges
            .iter()
            .map(|r| {
                let e = &mesh.edges[r.edge];
                let [p, q] = mesh.edge_endpoints(r.edge);
                let rule = edge_rule(p, q, qdeg);
                let phi = basis.tabulate(&rule.rule.points, nmax, 1);
                let trace = edge_basis(&rule.params, k, e.length);
                let s = r.sigma();
                EdgeContext { edge: r.edge, sigma: s, normal: [s * e.normal[0], s * e.normal[1]], rule, phi, trace }
            })
            .collect();

        Ok(Self { element: t, layout, max_degree, rule, basis, values, interior, edges })
    }

    fn check_degree(&self, r: usize) -> Result<()> {
        if r > self.max_degree {
            return Err(Error::Config(format!(
                "lift degree {r} exceeds the quadrature-supported degree {} on element {}",
                self.max_degree, self.element
            )));
        }
        Ok(())
    }
}

/// Matrix `C_E` (`dim P_r1 × m`) of `E_w` in the orthonormal `P_r1(T)` basis.
pub fn weak_elliptic_lift(ctx: &ElementContext, kappa: &KappaMatrix, r1: usize) -> Result<DMatrix<f64>> {
    ctx.check_degree(r1)?;
    let layout = ctx.layout;
    let (n1, nk, m) = (dim_p(r1), layout.interior_dim(), layout.total());
    let w = &ctx.rule.weights;

    let phi = ctx.values.columns(0, n1).into_owned();
    let it = &ctx.interior;
    let e_chi = &it.dxx * kappa.a + &it.dxy * (2.0 * kappa.b) + &it.dyy * kappa.c;

    let mut ce = DMatrix::zeros(n1, m);
    ce.columns_mut(0, nk).copy_from(&weighted_gram(&phi, w, &e_chi));

    for (i, ec) in ctx.edges.iter().enumerate() {
        let we = &ec.rule.rule.weights;
        let kn = kappa.apply(ec.normal);
        let phi_e = ec.phi.values.columns(0, n1).into_owned();
        let flux_phi = ec.phi.dx.columns(0, n1) * kn[0] + ec.phi.dy.columns(0, n1) * kn[1];
        let chi_e = ec.phi.values.columns(0, nk).into_owned();
        let flux_chi = ec.phi.dx.columns(0, nk) * kn[0] + ec.phi.dy.columns(0, nk) * kn[1];

        let mut int = ce.columns_mut(0, nk);
        int += weighted_gram(&flux_phi, we, &chi_e);
        int -= weighted_gram(&phi_e, we, &flux_chi);

        let vb = weighted_gram(&flux_phi, we, &ec.trace) * -1.0;
        ce.columns_mut(layout.trace_offset(i), layout.trace_dim()).copy_from(&vb);

        let g = ec.trace.columns(0, layout.flux_dim()).into_owned();
        let vg = weighted_gram(&phi_e, we, &g) * ec.sigma;
        ce.columns_mut(layout.flux_offset(i), layout.flux_dim()).copy_from(&vg);
    }
    Ok(ce)
}

/// Matrix `C_G` (`2 dim P_r2 × m`) of `∇_w`: rows `0..n2` hold x-components, rows `n2..2n2`
/// the y-components, both in the orthonormal `P_r2(T)` basis.
pub fn weak_gradient_lift(ctx: &ElementContext, r2: usize) -> Result<DMatrix<f64>> {
    ctx.check_degree(r2)?;
    let layout = ctx.layout;
    let (n2, nk, m) = (dim_p(r2), layout.interior_dim(), layout.total());
    let w = &ctx.rule.weights;

    let psi = ctx.values.columns(0, n2).into_owned();
    let mut cg = DMatrix::zeros(2 * n2, m);
    cg.view_mut((0, 0), (n2, nk)).copy_from(&weighted_gram(&psi, w, &ctx.interior.dx));
    cg.view_mut((n2, 0), (n2, nk)).copy_from(&weighted_gram(&psi, w, &ctx.interior.dy));

    for (i, ec) in ctx.edges.iter().enumerate() {
        let we = &ec.rule.rule.weights;
        let psi_e = ec.phi.values.columns(0, n2).into_owned();
        let chi_e = ec.phi.values.columns(0, nk).into_owned();
        let mass = weighted_gram(&psi_e, we, &chi_e);
        let trace = weighted_gram(&psi_e, we, &ec.trace);
        let off = layout.trace_offset(i);
        for (c, n) in ec.normal.iter().enumerate() {
            let mut int = cg.view_mut((c * n2, 0), (n2, nk));
            int -= &mass * *n;
            let mut vb = cg.view_mut((c * n2, off), (n2, layout.trace_dim()));
            vb += &trace * *n;
        }
    }
    Ok(cg)
}

/// Lift matrices of one element.
#[derive(Debug, Clone)]
pub struct LiftingTables {
    pub r1: usize,
    pub r2: usize,
    pub ce: DMatrix<f64>,
    pub cg: DMatrix<f64>,
}

impl LiftingTables {
    pub fn gradient_dim(&self) -> usize {
        dim_p(self.r2)
    }
}

/// `K_T = C_Eᵀ C_E + 2μ C_Gᵀ (κ ⊗ I) C_G + μ² M₀`, where `M₀` is the identity on the
/// interior block.
pub fn local_stiffness(tables: &LiftingTables, layout: &LocalDofLayout, kappa: &KappaMatrix, mu: f64) -> DMatrix<f64> {
    let n2 = tables.gradient_dim();
    let gx = tables.cg.rows(0, n2);
    let gy = tables.cg.rows(n2, n2);
    let mut k = tables.ce.tr_mul(&tables.ce);
    if mu != 0.0 {
        let kg = gx.tr_mul(&gx) * kappa.a + (gx.tr_mul(&gy) + gy.tr_mul(&gx)) * kappa.b + gy.tr_mul(&gy) * kappa.c;
        k += kg * (2.0 * mu);
        for i in 0..layout.interior_dim() {
            k[(i, i)] += mu * mu;
        }
    }
    k
}

/// Lifting tables plus the interior `P_k` basis of one element.
#[derive(Debug, Clone)]
pub struct ElementOperator {
    pub element: usize,
    pub layout: LocalDofLayout,
    pub tables: LiftingTables,
    pub basis: OrthoBasis,
}

impl ElementOperator {
    pub fn build(mesh: &PolytopalMesh, t: usize, k: usize, kappa: &KappaMatrix, degrees: &LiftDegrees) -> Result<Self> {
        let (r1, r2) = degrees.resolve(k);
        let ctx = ElementContext::new(mesh, t, k, k.max(r1).max(r2))?;
        let ce = weak_elliptic_lift(&ctx, kappa, r1)?;
        let cg = weak_gradient_lift(&ctx, r2)?;
        Ok(Self {
            element: t,
            layout: ctx.layout,
            tables: LiftingTables { r1, r2, ce, cg },
            basis: ctx.basis.truncated(k),
        })
    }

    pub fn stiffness(&self, kappa: &KappaMatrix, mu: f64) -> DMatrix<f64> {
        local_stiffness(&self.tables, &self.layout, kappa, mu)
    }

    /// Quadratic form `vᵀ K_T v` evaluated through the lifts.
    pub fn energy(&self, local: &[f64], kappa: &KappaMatrix, mu: f64) -> f64 {
        let v = nalgebra::DVectorView::from_slice(local, local.len());
        let e = &self.tables.ce * v;
        let g = &self.tables.cg * v;
        let n2 = self.tables.gradient_dim();
        let (gx, gy) = (g.rows(0, n2), g.rows(n2, n2));
        let grad = kappa.a * gx.dot(&gx) + 2.0 * kappa.b * gx.dot(&gy) + kappa.c * gy.dot(&gy);
        let v0 = v.rows(0, self.layout.interior_dim());
        e.norm_squared() + 2.0 * mu * grad + mu * mu * v0.norm_squared()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{gen_pentagonal, gen_triangular, MeshFamily};
    use crate::model::Coefficients;
    use crate::poly::{elliptic_apply, Axis, Poly2};
    use crate::quadrature::triangle_rule;
    use crate::testutil::jittered;
    use crate::weakops::{project_qh, WgSpace};
    use nalgebra::{DVector, SymmetricEigen};

    fn l2_coeffs(ctx: &ElementContext, n: usize, f: &Poly2) -> DVector<f64> {
        let vals = DMatrix::from_iterator(ctx.rule.len(), 1, ctx.rule.points.iter().map(|p| f.eval(p[0], p[1])));
        let c = weighted_gram(&ctx.values.columns(0, n).into_owned(), &ctx.rule.weights, &vals);
        DVector::from_column_slice(c.as_slice())
    }

    fn l2_norm(ctx: &ElementContext, f: &Poly2) -> f64 {
        ctx.rule.integrate(|x, y| f.eval(x, y).powi(2)).sqrt()
    }

    fn commuting_errors(mesh: &PolytopalMesh, k: usize, kappa: KappaMatrix) -> f64 {
        let coeffs = Coefficients::uniform(kappa, 1.0).unwrap();
        let space = WgSpace::new(mesh, k, &coeffs, LiftDegrees::default()).unwrap();
        let mut worst: f64 = 0.0;
        for d in 0..=k {
            for b in 0..=d {
                let p = Poly2::monomial(d - b, b, 1.0);
                let field = project_qh(&space, &coeffs, &p).unwrap();
                for t in 0..mesh.num_elements() {
                    let op = &space.ops[t];
                    let (r1, r2) = (op.tables.r1, op.tables.r2);
                    let ctx = ElementContext::new(mesh, t, k, r1.max(r2)).unwrap();
                    let v = DVector::from_vec(field.gather(&space.local_indices(t)));
                    let ep = elliptic_apply(&p, &kappa);
                    let (px, py) = (p.diff(Axis::X), p.diff(Axis::Y));
                    let e_err = (&op.tables.ce * &v - l2_coeffs(&ctx, dim_p(r1), &ep)).norm();
                    let g = &op.tables.cg * &v;
                    let n2 = dim_p(r2);
                    let gx_err = (g.rows(0, n2) - l2_coeffs(&ctx, n2, &px)).norm();
                    let gy_err = (g.rows(n2, n2) - l2_coeffs(&ctx, n2, &py)).norm();
                    let h = mesh.elements[t].diameter;
                    let scale = l2_norm(&ctx, &ep) + (l2_norm(&ctx, &px) + l2_norm(&ctx, &py)) / h + l2_norm(&ctx, &p) / (h * h);
                    let grad_scale = l2_norm(&ctx, &px) + l2_norm(&ctx, &py) + l2_norm(&ctx, &p) / h;
                    worst = worst.max(e_err / scale).max(gx_err.hypot(gy_err) / grad_scale);
                }
            }
        }
        worst
    }

    #[test]
    fn commuting_identities_hold_on_both_families() {
        let kappa = KappaMatrix::new(2.0, -1.0, 2.0).unwrap();
        for k in 2..=4 {
            let tri = commuting_errors(&gen_triangular(2).unwrap(), k, kappa);
            let pent = commuting_errors(&gen_pentagonal(2).unwrap(), k, kappa);
            assert!(tri < 1e-10 && pent < 1e-10, "k={k}: tri {tri:e} pent {pent:e}");
        }
    }

    #[test]
    fn elliptic_lift_of_x_squared() {
        let mesh = gen_pentagonal(2).unwrap();
        for (kappa, expect) in [(KappaMatrix::identity(), 2.0), (KappaMatrix::isotropic(2.0), 4.0)] {
            let coeffs = Coefficients::uniform(kappa, 0.0).unwrap();
            let space = WgSpace::new(&mesh, 2, &coeffs, LiftDegrees::default()).unwrap();
            let field = project_qh(&space, &coeffs, &Poly2::monomial(2, 0, 1.0)).unwrap();
            for t in [0, 5] {
                let op = &space.ops[t];
                let ew = &op.tables.ce * DVector::from_vec(field.gather(&space.local_indices(t)));
                let ctx = ElementContext::new(&mesh, t, 2, op.tables.r1.max(op.tables.r2)).unwrap();
                let vals = ctx.values.columns(0, dim_p(op.tables.r1)) * ew;
                assert!(vals.iter().all(|v| (v - expect).abs() < 1e-9), "{vals}");
            }
        }
    }

    #[test]
    fn gradient_lift_of_linear_and_constant() {
        let mesh = gen_triangular(2).unwrap();
        let coeffs = Coefficients::uniform(KappaMatrix::identity(), 1.0).unwrap();
        let space = WgSpace::new(&mesh, 3, &coeffs, LiftDegrees::default()).unwrap();
        for (p, expect) in [(Poly2::from_terms(&[(1, 0, 1.0), (0, 1, 1.0)]), [1.0, 1.0]), (Poly2::constant(3.0), [0.0, 0.0])] {
            let field = project_qh(&space, &coeffs, &p).unwrap();
            for t in 0..mesh.num_elements() {
                let op = &space.ops[t];
                let g = &op.tables.cg * DVector::from_vec(field.gather(&space.local_indices(t)));
                let ctx = ElementContext::new(&mesh, t, 3, op.tables.r1.max(op.tables.r2)).unwrap();
                let n2 = dim_p(op.tables.r2);
                let phi = ctx.values.columns(0, n2);
                let gx = phi * g.rows(0, n2);
                let gy = phi * g.rows(n2, n2);
                assert!(gx.iter().all(|v| (v - expect[0]).abs() < 1e-9));
                assert!(gy.iter().all(|v| (v - expect[1]).abs() < 1e-9));
            }
        }
    }

    /// Integrates `(Σ c_i φ_i) * m` over the element with a finer, independently built rule.
    fn lifted_moment(ctx: &ElementContext, mesh: &PolytopalMesh, t: usize, c: &[f64], m: &Poly2) -> f64 {
        let pts = mesh.element_coords(t);
        let tris = crate::quadrature::ear_clip(&pts).unwrap();
        let mut total = 0.0;
        for [i, j, l] in tris {
            let rule = triangle_rule(pts[i], pts[j], pts[l], 2 * ctx.max_degree + 6);
            let tab = ctx.basis.tabulate(&rule.points, c.len(), 0);
            let f = &tab.values * DVector::from_column_slice(c);
            total += rule.points.iter().zip(&rule.weights).zip(f.iter()).map(|((p, w), fv)| w * fv * m.eval(p[0], p[1])).sum::<f64>();
        }
        total
    }

    fn legendre(j: usize, t: f64) -> f64 {
        // explicit low-order Legendre polynomials
        match j {
            0 => 1.0,
            1 => t,
            2 => 0.5 * (3.0 * t * t - 1.0),
            3 => 0.5 * (5.0 * t.powi(3) - 3.0 * t),
            4 => (35.0 * t.powi(4) - 30.0 * t * t + 3.0) / 8.0,
            _ => unreachable!(),
        }
    }

    fn edge_moment(mesh: &PolytopalMesh, e: usize, j: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
        let [p, q] = mesh.edge_endpoints(e);
        let len = mesh.edges[e].length;
        let r = edge_rule(p, q, 40);
        r.rule
            .points
            .iter()
            .zip(&r.rule.weights)
            .zip(&r.params)
            .map(|((x, w), &t)| w * legendre(j, t) * ((2 * j + 1) as f64 / len).sqrt() * f(x[0], x[1]))
            .sum()
    }

    #[test]
    fn single_flux_dof_brute_force() {
        let mesh = jittered(&gen_pentagonal(2).unwrap(), 3, 0.05);
        let kappa = KappaMatrix::new(2.0, -1.0, 2.0).unwrap();
        let k = 3;
        let t = 6;
        let op = ElementOperator::build(&mesh, t, k, &kappa, &LiftDegrees::default()).unwrap();
        let ctx = ElementContext::new(&mesh, t, k, op.tables.r1.max(op.tables.r2)).unwrap();
        for local_edge in [0, 3] {
            let r = mesh.elements[t].edges[local_edge];
            for j in 0..k {
                let col = op.layout.flux_offset(local_edge) + j;
                let c: Vec<f64> = op.tables.ce.column(col).iter().copied().collect();
                for (a, b) in [(0, 0), (1, 0), (2, 3), (4, 1)] {
                    let m = Poly2::monomial(a, b, 1.0);
                    let lhs = lifted_moment(&ctx, &mesh, t, &c, &m);
                    let rhs = r.sigma() * edge_moment(&mesh, r.edge, j, |x, y| m.eval(x, y));
                    assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn single_trace_dof_gradient_brute_force() {
        let mesh = jittered(&gen_triangular(3).unwrap(), 5, 0.15);
        let k = 2;
        let t = 9;
        let op = ElementOperator::build(&mesh, t, k, &KappaMatrix::identity(), &LiftDegrees::default()).unwrap();
        let ctx = ElementContext::new(&mesh, t, k, op.tables.r1.max(op.tables.r2)).unwrap();
        let n2 = dim_p(op.tables.r2);
        for local_edge in 0..3 {
            let r = mesh.elements[t].edges[local_edge];
            let n = mesh.edges[r.edge].normal;
            let nt = [r.sigma() * n[0], r.sigma() * n[1]];
            for j in 0..=k {
                let col = op.tables.cg.column(op.layout.trace_offset(local_edge) + j);
                let cx: Vec<f64> = col.rows(0, n2).iter().copied().collect();
                let cy: Vec<f64> = col.rows(n2, n2).iter().copied().collect();
                for (a, b) in [(0, 0), (1, 1), (3, 0), (0, 2)] {
                    let m = Poly2::monomial(a, b, 1.0);
                    let lx = lifted_moment(&ctx, &mesh, t, &cx, &m);
                    let ly = lifted_moment(&ctx, &mesh, t, &cy, &m);
                    let rx = nt[0] * edge_moment(&mesh, r.edge, j, |x, y| m.eval(x, y));
                    let ry = nt[1] * edge_moment(&mesh, r.edge, j, |x, y| m.eval(x, y));
                    assert!((lx - rx).abs() < 1e-10 * (1.0 + rx.abs()));
                    assert!((ly - ry).abs() < 1e-10 * (1.0 + ry.abs()));
                }
            }
        }
    }

    #[test]
    fn lift_table_shapes() {
        let mesh = gen_pentagonal(1).unwrap();
        let op = ElementOperator::build(&mesh, 0, 2, &KappaMatrix::identity(), &LiftDegrees::default()).unwrap();
        assert_eq!(op.tables.ce.ncols(), op.layout.total());
        assert_eq!(op.tables.cg.ncols(), op.layout.total());
        assert_eq!(op.tables.ce.nrows(), dim_p(6));
        assert_eq!(op.tables.cg.nrows(), 2 * dim_p(4));
    }

    #[test]
    fn stiffness_of_constants_is_mass_term() {
        let mesh = gen_pentagonal(2).unwrap();
        let mu = 1.7;
        let coeffs = Coefficients::uniform(KappaMatrix::isotropic(2.0), mu).unwrap();
        let space = WgSpace::new(&mesh, 2, &coeffs, LiftDegrees::default()).unwrap();
        let field = project_qh(&space, &coeffs, &Poly2::constant(1.0)).unwrap();
        for t in 0..mesh.num_elements() {
            let v = DVector::from_vec(field.gather(&space.local_indices(t)));
            let q = space.ops[t].energy(v.as_slice(), &coeffs.kappa(t), mu);
            let expect = mu * mu * mesh.elements[t].area;
            assert!((q - expect).abs() < 1e-10 * expect, "{q} vs {expect}");
            let k = space.ops[t].stiffness(&coeffs.kappa(t), mu);
            let qk = v.dot(&(&k * &v));
            assert!((qk - expect).abs() < 1e-14 * k.amax() * v.norm_squared());
        }
        let zero = DVector::zeros(space.ops[0].layout.total());
        let k0 = space.ops[0].stiffness(&coeffs.kappa(0), 0.0);
        assert_eq!(zero.dot(&(&k0 * &zero)), 0.0);
    }

    #[test]
    fn stiffness_is_symmetric_positive_semidefinite() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for fam in [MeshFamily::Triangular, MeshFamily::Pentagonal] {
            let mesh = jittered(&fam.generate(3).unwrap(), 17, 0.05);
            for _ in 0..10 {
                let t = rng.random_range(0..mesh.num_elements());
                for k in 2..=4 {
                    let kappa = KappaMatrix::new(2.0, -1.0, 2.0).unwrap();
                    let op = ElementOperator::build(&mesh, t, k, &kappa, &LiftDegrees::default()).unwrap();
                    let km = op.stiffness(&kappa, 1.0);
                    let asym = (&km - km.transpose()).amax();
                    assert!(asym <= 1e-12 * km.amax());
                    let eig = SymmetricEigen::new((&km + km.transpose()) * 0.5).eigenvalues;
                    let (lo, hi) = (eig.min(), eig.max());
                    assert!(lo >= -1e-10 * hi, "{fam} k={k}: eigenvalues [{lo}, {hi}]");
                }
            }
        }
    }

    #[test]
    fn flipping_an_edge_normal_negates_its_flux_columns() {
        let mesh = gen_pentagonal(2).unwrap();
        let e = mesh.edges.iter().position(|e| !e.boundary).unwrap();
        let mut flipped = mesh.clone();
        flipped.edges[e].normal = [-mesh.edges[e].normal[0], -mesh.edges[e].normal[1]];
        for &t in &mesh.edges[e].elements {
            for r in flipped.elements[t].edges.iter_mut().filter(|r| r.edge == e) {
                r.sign = -r.sign;
            }
        }
        assert!(flipped.validate().is_empty());
        let kappa = KappaMatrix::new(2.0, -1.0, 2.0).unwrap();
        let k = 2;
        let t = mesh.edges[e].elements[0];
        let a = ElementOperator::build(&mesh, t, k, &kappa, &LiftDegrees::default()).unwrap();
        let b = ElementOperator::build(&flipped, t, k, &kappa, &LiftDegrees::default()).unwrap();
        let le = mesh.elements[t].edges.iter().position(|r| r.edge == e).unwrap();
        for j in 0..k {
            let c = a.layout.flux_offset(le) + j;
            assert!((a.tables.ce.column(c) + b.tables.ce.column(c)).amax() < 1e-14);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(12))]

            #[test]
            fn commuting_identities_on_jittered_meshes(seed in any::<u64>(), pent in any::<bool>(), k in 2usize..5) {
                let base = if pent { gen_pentagonal(2) } else { gen_triangular(2) }.unwrap();
                let kappa = KappaMatrix::new(2.0, -1.0, 2.0).unwrap();
                let err = commuting_errors(&jittered(&base, seed, 0.05), k, kappa);
                prop_assert!(err < 1e-10, "{err:e}");
            }
        }
    }
}
