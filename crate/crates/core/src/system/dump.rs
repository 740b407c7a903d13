//! Plain-text export of an assembled system.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::assemble::AssembledSystem;
use crate::error::Result;

/// Writes every stored entry as a 1-based `row col value` line.
pub fn write_matrix<W: Write>(system: &AssembledSystem, mut w: W) -> Result<()> {
    for (r, c, v) in system.matrix.entries() {
        writeln!(w, "{} {} {:.17e}", r + 1, c + 1, v)?;
    }
    Ok(())
}

/// Writes the right-hand side, one value per line.
pub fn write_rhs<W: Write>(system: &AssembledSystem, mut w: W) -> Result<()> {
    for v in &system.rhs {
        writeln!(w, "{v:.17e}")?;
    }
    Ok(())
}

/// Path of the right-hand-side file that accompanies a matrix dump.
pub fn rhs_path(matrix_path: &Path) -> PathBuf {
    let mut s = matrix_path.as_os_str().to_owned();
    s.push(".rhs");
    PathBuf::from(s)
}

/// Writes the matrix to `path` and the right-hand side next to it (see [`rhs_path`]).
pub fn dump_system(system: &AssembledSystem, path: &Path) -> Result<()> {
    let mut m = BufWriter::new(File::create(path)?);
    write_matrix(system, &mut m)?;
    m.flush()?;
    let mut r = BufWriter::new(File::create(rhs_path(path))?);
    write_rhs(system, &mut r)?;
    r.flush()?;
    Ok(())
}
