//! Versioned plain-text mesh documents.
//!
//! ```text
//! wgfem-mesh 1
//! level 1
//! family tri
//! vertices 4
//! 0 0.0000000000000000e0 0.0000000000000000e0
//! ...
//! edges 5
//! 0 0 1 1
//! ...
//! elements 2
//! 0 0 1 3
//! ...
//! ```
//!
//! Edge lines are `index v0 v1 boundary`; element lines are `index` followed by the
//! counterclockwise vertex loop. Floats carry 17 significant digits.

use std::io::{BufRead, Write};

use super::{MeshFamily, Point, PolytopalMesh};
use crate::error::{Error, Result};

const MAGIC: &str = "wgfem-mesh";
const VERSION: u32 = 1;

pub fn write_mesh<W: Write>(mesh: &PolytopalMesh, mut w: W) -> Result<()> {
    writeln!(w, "{MAGIC} {VERSION}")?;
    writeln!(w, "level {}", mesh.level)?;
    match mesh.family {
        Some(f) => writeln!(w, "family {f}")?,
        None => writeln!(w, "family none")?,
    }
    writeln!(w, "vertices {}", mesh.vertices.len())?;
    for (i, p) in mesh.vertices.iter().enumerate() {
        writeln!(w, "{i} {:.16e} {:.16e}", p[0], p[1])?;
    }
    writeln!(w, "edges {}", mesh.edges.len())?;
    for (i, e) in mesh.edges.iter().enumerate() {
        writeln!(w, "{i} {} {} {}", e.vertices[0], e.vertices[1], u8::from(e.boundary))?;
    }
    writeln!(w, "elements {}", mesh.elements.len())?;
    for (i, t) in mesh.elements.iter().enumerate() {
        write!(w, "{i}")?;
        for v in &t.vertices {
            write!(w, " {v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_fields(&mut self) -> Result<Vec<String>> {
        loop {
            let line = self
                .inner
                .next()
                .ok_or_else(|| Error::Mesh(format!("unexpected end of mesh document after line {}", self.line_no)))??;
            self.line_no += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Ok(trimmed.split_whitespace().map(str::to_owned).collect());
        }
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::Mesh(format!("line {}: {msg}", self.line_no))
    }

    fn header(&mut self, key: &str) -> Result<String> {
        let f = self.next_fields()?;
        if f.len() != 2 || f[0] != key {
            return Err(self.err(format!("expected `{key} <value>`")));
        }
        Ok(f[1].clone())
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let v = self.header(key)?;
        v.parse().map_err(|_| self.err(format!("bad {key} count {v:?}")))
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(format!("cannot parse {s:?}")))
    }

    fn indexed(&mut self, expected: usize) -> Result<Vec<String>> {
        let f = self.next_fields()?;
        let idx: usize = self.parse(f.first().map(String::as_str).unwrap_or(""))?;
        if idx != expected {
            return Err(self.err(format!("expected index {expected}, found {idx}")));
        }
        Ok(f[1..].to_vec())
    }
}

/// Reads a mesh document and rebuilds its topology; the listed edges must agree with the
/// edges implied by the element loops.
pub fn read_mesh<R: BufRead>(r: R) -> Result<PolytopalMesh> {
    let mut lines = Lines { inner: r.lines(), line_no: 0 };
    let head = lines.next_fields()?;
    if head.len() != 2 || head[0] != MAGIC {
        return Err(lines.err("not a wgfem mesh document"));
    }
    let version: u32 = lines.parse(&head[1])?;
    if version != VERSION {
        return Err(lines.err(format!("unsupported mesh version {version}")));
    }
    let level: usize = {
        let v = lines.header("level")?;
        lines.parse(&v)?
    };
    let family = match lines.header("family")?.as_str() {
        "none" => None,
        other => Some(other.parse::<MeshFamily>().map_err(|_| lines.err(format!("unknown family {other:?}")))?),
    };

    let nv = lines.count("vertices")?;
    let mut vertices: Vec<Point> = Vec::with_capacity(nv);
    for i in 0..nv {
        let f = lines.indexed(i)?;
        if f.len() != 2 {
            return Err(lines.err("vertex lines need `index x y`"));
        }
        vertices.push([lines.parse(&f[0])?, lines.parse(&f[1])?]);
    }

    let ne = lines.count("edges")?;
    let mut listed = Vec::with_capacity(ne);
    for i in 0..ne {
        let f = lines.indexed(i)?;
        if f.len() != 3 {
            return Err(lines.err("edge lines need `index v0 v1 boundary`"));
        }
        let v0: usize = lines.parse(&f[0])?;
        let v1: usize = lines.parse(&f[1])?;
        let b: u8 = lines.parse(&f[2])?;
        listed.push(([v0, v1], b == 1));
    }

    let nt = lines.count("elements")?;
    let mut loops = Vec::with_capacity(nt);
    for i in 0..nt {
        let f = lines.indexed(i)?;
        let lp = f.iter().map(|s| lines.parse::<usize>(s)).collect::<Result<Vec<_>>>()?;
        loops.push(lp);
    }

    let mut mesh = PolytopalMesh::from_loops(vertices, loops, level)?;
    mesh.family = family;
    if mesh.edges.len() != listed.len() {
        return Err(Error::Mesh(format!(
            "document lists {} edges but the element loops define {}",
            listed.len(),
            mesh.edges.len()
        )));
    }
    for (i, (e, (verts, boundary))) in mesh.edges.iter().zip(&listed).enumerate() {
        if e.vertices != *verts || e.boundary != *boundary {
            return Err(Error::Mesh(format!("edge {i} does not match the element loops")));
        }
    }
    Ok(mesh)
}
