//! Polygonal meshes of the unit square.
//!
//! Every edge carries one global unit normal. Interior edges use the left-hand normal of the
//! tangent running from the lower vertex index to the higher one; boundary edges use the
//! outward normal of the domain. Each element records, per edge, the sign `σ(T, e)` that is
//! `+1` when the global normal points out of `T`, so the two elements sharing an interior
//! edge always see opposite signs.

mod generate;
mod io;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use generate::{gen_pentagonal, gen_triangular, MAX_LEVEL};
pub use io::{read_mesh, write_mesh};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshFamily {
    Triangular,
    Pentagonal,
}

impl MeshFamily {
    pub fn generate(self, level: usize) -> Result<PolytopalMesh> {
        match self {
            MeshFamily::Triangular => gen_triangular(level),
            MeshFamily::Pentagonal => gen_pentagonal(level),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            MeshFamily::Triangular => "tri",
            MeshFamily::Pentagonal => "pent",
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MeshFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tri" | "triangular" => Ok(MeshFamily::Triangular),
            "pent" | "pentagonal" => Ok(MeshFamily::Pentagonal),
            other => Err(Error::Config(format!("unknown mesh family {other:?} (expected tri or pent)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoint vertex indices, lower index first.
    pub vertices: [usize; 2],
    pub normal: Point,
    pub length: f64,
    pub boundary: bool,
    /// Adjacent elements: one for boundary edges, two otherwise.
    pub elements: Vec<usize>,
}

impl Edge {
    pub fn tangent(&self, mesh_vertices: &[Point]) -> Point {
        let [a, b] = self.vertices;
        let (p, q) = (mesh_vertices[a], mesh_vertices[b]);
        [(q[0] - p[0]) / self.length, (q[1] - p[1]) / self.length]
    }
}

/// An element's view of one of its edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRef {
    pub edge: usize,
    /// `+1` iff the global edge normal is outward for this element.
    pub sign: i8,
}

impl EdgeRef {
    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sign as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// Counterclockwise vertex loop.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub edges: Vec<EdgeRef>,
    pub barycenter: Point,
    pub diameter: f64,
    pub area: f64,
    pub convex: bool,
}

impl Element {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn coords(&self, mesh_vertices: &[Point]) -> Vec<Point> {
        self.vertices.iter().map(|&v| mesh_vertices[v]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopalMesh {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub elements: Vec<Element>,
    /// Refinement index `i` of grid `G_i`.
    pub level: usize,
    pub family: Option<MeshFamily>,
}

pub(crate) fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s
}

fn centroid(pts: &[Point], area: f64) -> Point {
    let n = pts.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        let w = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (6.0 * area), cy / (6.0 * area)]
}

fn diameter(pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d = d.max((p[0] - q[0]).hypot(p[1] - q[1]));
        }
    }
    d
}

pub(crate) fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// True when no interior angle of the (counterclockwise) loop exceeds π.
pub fn is_convex(pts: &[Point]) -> bool {
    let n = pts.len();
    (0..n).all(|i| cross(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]) > 0.0)
}

/// Outward normal of the side `p -> q` of a counterclockwise loop.
fn side_normal(p: Point, q: Point) -> Point {
    let (tx, ty) = (q[0] - p[0], q[1] - p[1]);
    let l = tx.hypot(ty);
    [ty / l, -tx / l]
}

impl PolytopalMesh {
    /// Builds the full topology from vertex coordinates and counterclockwise element loops.
    ///
    /// Edges are numbered in order of first appearance while walking the loops.
    pub fn from_loops(vertices: Vec<Point>, loops: Vec<Vec<usize>>, level: usize) -> Result<Self> {
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut elements = Vec::with_capacity(loops.len());

        for (t, lp) in loops.iter().enumerate() {
            if lp.len() < 3 {
                return Err(Error::Mesh(format!("element {t} has only {} vertices", lp.len())));
            }
            if let Some(&v) = lp.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::Mesh(format!("element {t} references missing vertex {v}")));
            }
            let n = lp.len();
            let mut refs = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (lp[i], lp[(i + 1) % n]);
                if a == b {
                    return Err(Error::Mesh(format!("element {t} has a repeated vertex {a}")));
                }
                let key = (a.min(b), a.max(b));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    let (p, q) = (vertices[key.0], vertices[key.1]);
                    let length = (q[0] - p[0]).hypot(q[1] - p[1]);
                    edges.push(Edge {
                        vertices: [key.0, key.1],
                        normal: side_normal(p, q),
                        length,
                        boundary: false,
                        elements: Vec::new(),
                    });
                    edges.len() - 1
                });
                let e = &mut edges[id];
                if e.elements.len() == 2 {
                    return Err(Error::Mesh(format!("edge {key:?} is shared by more than two elements")));
                }
                if e.length == 0.0 {
                    return Err(Error::Mesh(format!("edge {key:?} has zero length")));
                }
                e.elements.push(t);
                refs.push((id, side_normal(vertices[a], vertices[b])));
            }
            let pts: Vec<Point> = lp.iter().map(|&v| vertices[v]).collect();
            let area = signed_area(&pts);
            elements.push((pts, area, refs));
        }

        for e in edges.iter_mut() {
            if e.elements.len() == 1 {
                e.boundary = true;
            }
        }
        // boundary edges take the outward normal of their single element
        let mut built = Vec::with_capacity(elements.len());
        for (t, (pts, area, refs)) in elements.into_iter().enumerate() {
            let mut edge_refs = Vec::with_capacity(refs.len());
            for (id, outward) in refs {
                let e = &mut edges[id];
                if e.boundary {
                    e.normal = outward;
                }
                let dot = e.normal[0] * outward[0] + e.normal[1] * outward[1];
                edge_refs.push(EdgeRef { edge: id, sign: if dot > 0.0 { 1 } else { -1 } });
            }
            if area == 0.0 {
                return Err(Error::Mesh(format!("element {t} has zero area")));
            }
            built.push(Element {
                vertices: loops[t].clone(),
                edges: edge_refs,
                barycenter: centroid(&pts, area),
                diameter: diameter(&pts),
                area,
                convex: is_convex(&pts),
            });
        }

        Ok(Self { vertices, edges, elements: built, level, family: None })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Largest element diameter.
    pub fn h(&self) -> f64 {
        self.elements.iter().map(|t| t.diameter).fold(0.0, f64::max)
    }

    pub fn is_convex(&self) -> bool {
        self.elements.iter().all(|t| t.convex)
    }

    pub fn element_coords(&self, t: usize) -> Vec<Point> {
        self.elements[t].coords(&self.vertices)
    }

    /// Endpoint coordinates of an edge, lower vertex index first.
    pub fn edge_endpoints(&self, e: usize) -> [Point; 2] {
        let [a, b] = self.edges[e].vertices;
        [self.vertices[a], self.vertices[b]]
    }

    /// Checks every structural and geometric invariant; an empty list means the mesh is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |entity, rule, detail: String| out.push(Violation { entity, rule, detail });
        let tol = 1e-12;

        let euler = self.num_vertices() as isize - self.num_edges() as isize + self.num_elements() as isize + 1;
        if euler != 2 {
            push(Entity::Mesh, "euler formula", format!("V - E + F = {euler}"));
        }

        for (i, e) in self.edges.iter().enumerate() {
            let want = if e.boundary { 1 } else { 2 };
            if e.elements.len() != want {
                push(Entity::Edge(i), "edge incidence", format!("{} adjacent elements", e.elements.len()));
            }
            if e.vertices[0] >= e.vertices[1] {
                push(Entity::Edge(i), "endpoint order", format!("{:?}", e.vertices));
            }
            let nn = e.normal[0].hypot(e.normal[1]);
            if (nn - 1.0).abs() > tol {
                push(Entity::Edge(i), "normal unit length", format!("|n| = {nn}"));
            }
            let t = e.tangent(&self.vertices);
            let dot = t[0] * e.normal[0] + t[1] * e.normal[1];
            if dot.abs() > tol {
                push(Entity::Edge(i), "normal orthogonality", format!("n.t = {dot}"));
            }
            if e.boundary {
                let [p, q] = self.edge_endpoints(i);
                let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
                let probe = [mid[0] + 1e-6 * e.normal[0], mid[1] + 1e-6 * e.normal[1]];
                let inside = (0.0..=1.0).contains(&probe[0]) && (0.0..=1.0).contains(&probe[1]);
                if inside {
                    push(Entity::Edge(i), "boundary normal outward", format!("n = {:?}", e.normal));
                }
            } else if e.elements.len() == 2 {
                let s: i32 = e
                    .elements
                    .iter()
                    .filter_map(|&t| self.elements.get(t))
                    .flat_map(|el| el.edges.iter().filter(|r| r.edge == i).map(|r| r.sign as i32))
                    .sum();
                if s != 0 {
                    push(Entity::Edge(i), "normal orientation consistency", format!("sign sum {s}"));
                }
            }
            for &t in &e.elements {
                let listed = self.elements.get(t).is_some_and(|el| el.edges.iter().any(|r| r.edge == i));
                if !listed {
                    push(Entity::Edge(i), "incidence involution", format!("element {t} does not reference it"));
                }
            }
        }

        for (t, el) in self.elements.iter().enumerate() {
            let pts = el.coords(&self.vertices);
            let area = signed_area(&pts);
            if area <= 0.0 {
                push(Entity::Element(t), "element orientation", format!("signed area {area}"));
            }
            if (area - el.area).abs() > tol * area.abs().max(1.0) {
                push(Entity::Element(t), "area", format!("stored {} vs {area}", el.area));
            }
            let d = diameter(&pts);
            if (d - el.diameter).abs() > tol {
                push(Entity::Element(t), "diameter", format!("stored {} vs {d}", el.diameter));
            }
            if el.edges.len() != el.vertices.len() {
                push(Entity::Element(t), "edge count", format!("{} edges, {} vertices", el.edges.len(), el.vertices.len()));
                continue;
            }
            let n = el.vertices.len();
            for (i, r) in el.edges.iter().enumerate() {
                let Some(e) = self.edges.get(r.edge) else {
                    push(Entity::Element(t), "incidence involution", format!("missing edge {}", r.edge));
                    continue;
                };
                let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
                if e.vertices != [a.min(b), a.max(b)] {
                    push(Entity::Element(t), "edge endpoints", format!("local edge {i} is {:?}", e.vertices));
                }
                if !e.elements.contains(&t) {
                    push(Entity::Element(t), "incidence involution", format!("edge {} does not list it", r.edge));
                }
                let out = side_normal(self.vertices[a], self.vertices[b]);
                let dot = out[0] * e.normal[0] + out[1] * e.normal[1];
                if (dot > 0.0) != (r.sign > 0) {
                    push(Entity::Element(t), "edge sign", format!("local edge {i} sign {}", r.sign));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Mesh,
    Edge(usize),
    Element(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub entity: Entity,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.entity {
            Entity::Mesh => write!(f, "mesh: {} ({})", self.rule, self.detail),
            Entity::Edge(i) => write!(f, "edge {i}: {} ({})", self.rule, self.detail),
            Entity::Element(i) => write!(f, "element {i}: {} ({})", self.rule, self.detail),
        }
    }
}
