//! Uniform grids `G_i` of the unit square with `n = 2^(i-1)` cells per side.

use super::{MeshFamily, Point, PolytopalMesh};
use crate::error::{Error, Result};

pub const MAX_LEVEL: usize = 12;

/// Zigzag points splitting a unit cell into two non-convex pentagons, in cell coordinates.
pub const ZIGZAG: [Point; 2] = [[5.0 / 6.0, 1.0 / 3.0], [1.0 / 6.0, 2.0 / 3.0]];

fn cells_per_side(level: usize) -> Result<usize> {
    if !(1..=MAX_LEVEL).contains(&level) {
        return Err(Error::Config(format!("mesh level {level} outside the valid range [1, {MAX_LEVEL}]")));
    }
    Ok(1 << (level - 1))
}

fn grid_vertices(n: usize) -> Vec<Point> {
    let h = 1.0 / n as f64;
    let mut v = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            v.push([i as f64 * h, j as f64 * h]);
        }
    }
    v
}

/// Each cell split along its `(0,0)-(1,1)` diagonal.
pub fn gen_triangular(level: usize) -> Result<PolytopalMesh> {
    let n = cells_per_side(level)?;
    let vertices = grid_vertices(n);
    let id = |i: usize, j: usize| i + j * (n + 1);
    let mut loops = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v11, v01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            loops.push(vec![v00, v10, v11]);
            loops.push(vec![v00, v11, v01]);
        }
    }
    let mut mesh = PolytopalMesh::from_loops(vertices, loops, level)?;
    mesh.family = Some(MeshFamily::Triangular);
    Ok(mesh)
}

/// Each cell split into two non-convex pentagons by the zigzag
/// `(0,0) -> (5/6,1/3) -> (1/6,2/3) -> (1,1)`.
pub fn gen_pentagonal(level: usize) -> Result<PolytopalMesh> {
    let n = cells_per_side(level)?;
    let h = 1.0 / n as f64;
    let mut vertices = grid_vertices(n);
    let id = |i: usize, j: usize| i + j * (n + 1);
    let mut loops = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let p1 = vertices.len();
            for z in ZIGZAG {
                vertices.push([(i as f64 + z[0]) * h, (j as f64 + z[1]) * h]);
            }
            let p2 = p1 + 1;
            let (v00, v10, v11, v01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            loops.push(vec![v00, v10, v11, p2, p1]);
            loops.push(vec![v00, p1, p2, v11, v01]);
        }
    }
    let mut mesh = PolytopalMesh::from_loops(vertices, loops, level)?;
    mesh.family = Some(MeshFamily::Pentagonal);
    Ok(mesh)
}
