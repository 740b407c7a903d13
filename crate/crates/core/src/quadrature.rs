//! Quadrature on edges, triangles and simple (possibly non-convex) polygons.
//!
//! Polygons are ear-clipped into triangles; each triangle carries a tensor Gauss–Legendre
//! rule pulled back through the collapsed (Duffy) map, so every weight is positive and any
//! exactness degree is available without rule tables.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::{cross, signed_area, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// All polynomials of total degree ≤ `exactness` are integrated exactly.
    pub exactness: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p[0], p[1])).sum()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Edge rule with the chordal parameter `t ∈ [-1, 1]` of each point.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRule {
    pub rule: QuadRule,
    pub params: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule on the segment `p -> q`, exact to degree `d`.
pub fn edge_rule(p: Point, q: Point, d: usize) -> EdgeRule {
    let n = d / 2 + 1;
    let (xs, ws) = gauss_legendre(n);
    let half = 0.5 * (q[0] - p[0]).hypot(q[1] - p[1]);
    let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    let dir = [0.5 * (q[0] - p[0]), 0.5 * (q[1] - p[1])];
    let points = xs.iter().map(|&t| [mid[0] + t * dir[0], mid[1] + t * dir[1]]).collect();
    let weights = ws.iter().map(|w| w * half).collect();
    EdgeRule { rule: QuadRule { points, weights, exactness: 2 * n - 1 }, params: xs }
}

/// Collapsed tensor rule on the triangle `a, b, c`, exact to degree `d`.
pub fn triangle_rule(a: Point, b: Point, c: Point, d: usize) -> QuadRule {
    let mut rule = QuadRule { points: Vec::new(), weights: Vec::new(), exactness: d };
    push_triangle(&mut rule, a, b, c, d);
    rule
}

fn push_triangle(rule: &mut QuadRule, a: Point, b: Point, c: Point, d: usize) {
    // the collapsed direction carries one extra degree from the Jacobian
    let n = (d + 2).div_ceil(2);
    let (xs, ws) = gauss_legendre(n);
    let jac = cross(a, b, c).abs();
    for (xi, wi) in xs.iter().zip(&ws) {
        let s = 0.5 * (xi + 1.0);
        for (xj, wj) in xs.iter().zip(&ws) {
            let t = 0.5 * (xj + 1.0) * (1.0 - s);
            let p = [
                a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]),
                a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1]),
            ];
            rule.points.push(p);
            rule.weights.push(0.25 * wi * wj * (1.0 - s) * jac);
        }
    }
}

fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0
}

/// Ear-clipping triangulation of a counterclockwise simple polygon.
///
/// At every step the ear with the smallest local vertex index is removed, so the output is
/// deterministic. Returned triangles index into `pts` and are counterclockwise.
pub fn ear_clip(pts: &[Point]) -> Result<Vec<[usize; 3]>> {
    let area = signed_area(pts);
    if !(area > 0.0) {
        return Err(Error::Mesh(format!("cannot triangulate polygon with signed area {area}")));
    }
    let mut remaining: Vec<usize> = (0..pts.len()).collect();
    let mut tris = Vec::with_capacity(pts.len().saturating_sub(2));
    while remaining.len() > 3 {
        let m = remaining.len();
        let ear = (0..m).find(|&i| {
            let (ip, inx) = (remaining[(i + m - 1) % m], remaining[(i + 1) % m]);
            let (a, b, c) = (pts[ip], pts[remaining[i]], pts[inx]);
            cross(a, b, c) > 0.0
                && remaining
                    .iter()
                    .filter(|&&v| v != ip && v != remaining[i] && v != inx)
                    .all(|&v| !point_in_triangle(pts[v], a, b, c))
        });
        let Some(i) = ear else {
            return Err(Error::Mesh("polygon is not simple: no ear found".into()));
        };
        tris.push([remaining[(i + m - 1) % m], remaining[i], remaining[(i + 1) % m]]);
        remaining.remove(i);
    }
    tris.push([remaining[0], remaining[1], remaining[2]]);
    Ok(tris)
}

/// Rule on a counterclockwise simple polygon, exact to degree `d`.
pub fn polygon_rule(pts: &[Point], d: usize) -> Result<QuadRule> {
    let tris = ear_clip(pts)?;
    let mut rule = QuadRule { points: Vec::new(), weights: Vec::new(), exactness: d };
    for [i, j, k] in tris {
        push_triangle(&mut rule, pts[i], pts[j], pts[k], d);
    }
    Ok(rule)
}
