use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use super::case::ModelCase;
use super::norms::{error_norms, ErrorNorms};
use crate::error::{Error, Result};
use crate::mesh::{MeshFamily, PolytopalMesh};
use crate::system::{assemble, dump_system, solve, SolveStats, SolverKind};
use crate::weakops::{project_qh, LiftDegrees, WgSpace};

/// Discretization and solver settings shared by every level of a study.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StudyConfig {
    pub degrees: LiftDegrees,
    pub solver: SolverKind,
    pub condense: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub setup: Duration,
    pub assemble: Duration,
    pub solve: Duration,
}

/// Outcome of one solve on one mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub n_elements: usize,
    pub n_dofs: usize,
    pub n_unknowns: usize,
    pub h: f64,
    /// `(min, max)` over elements.
    pub r1: (usize, usize),
    pub r2: (usize, usize),
    pub errors: ErrorNorms,
    pub stats: SolveStats,
    pub timings: Timings,
}

/// Solves `case` on an already generated mesh and measures the errors against `Q_h u`.
/// When `dump` is given the assembled system is written there before solving.
pub fn solve_mesh(
    case: &ModelCase,
    mesh: &PolytopalMesh,
    k: usize,
    config: &StudyConfig,
    dump: Option<&std::path::Path>,
) -> Result<LevelResult> {
    let problem = case.problem()?;
    let start = Instant::now();
    let space = WgSpace::new(mesh, k, &problem.coefficients, config.degrees)?;
    let setup = start.elapsed();

    let start = Instant::now();
    let system = assemble(&space, &problem, config.condense)?;
    let assemble_time = start.elapsed();
    if let Some(path) = dump {
        dump_system(&system, path)?;
    }

    let start = Instant::now();
    let solution = solve(&system, config.solver)?;
    let solve_time = start.elapsed();

    let projected = project_qh(&space, &problem.coefficients, &case.exact)?;
    let (r1, r2) = space.degree_ranges();
    Ok(LevelResult {
        level: mesh.level,
        n_elements: mesh.num_elements(),
        n_dofs: space.dofs.total(),
        n_unknowns: system.dim(),
        h: mesh.h(),
        r1,
        r2,
        errors: error_norms(&space, &projected, &solution.field),
        stats: solution.stats,
        timings: Timings { setup, assemble: assemble_time, solve: solve_time },
    })
}

pub fn solve_level(case: &ModelCase, family: MeshFamily, level: usize, k: usize, config: &StudyConfig) -> Result<LevelResult> {
    let mesh = family.generate(level)?;
    solve_mesh(case, &mesh, k, config, None)
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub result: LevelResult,
    /// `log₂` of the error ratio to the previous row for `(l2, grad, ell)`.
    pub orders: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub case: String,
    pub family: MeshFamily,
    pub k: usize,
    pub r1: (usize, usize),
    pub r2: (usize, usize),
    pub rows: Vec<ConvergenceRow>,
}

pub const STUDY_LEVELS: RangeInclusive<usize> = 1..=7;

pub fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Solves the case on each level in turn and tabulates errors and observed orders.
pub fn run_convergence(
    case: &ModelCase,
    family: MeshFamily,
    k: usize,
    levels: RangeInclusive<usize>,
    config: &StudyConfig,
) -> Result<ConvergenceTable> {
    if !(2..=4).contains(&k) {
        return Err(Error::Config(format!("convergence studies support k in 2..=4, got {k}")));
    }
    if levels.is_empty() || !STUDY_LEVELS.contains(levels.start()) || !STUDY_LEVELS.contains(levels.end()) {
        return Err(Error::Config(format!(
            "levels {}:{} must be a nonempty ascending range within {}:{}",
            levels.start(),
            levels.end(),
            STUDY_LEVELS.start(),
            STUDY_LEVELS.end()
        )));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for level in levels {
        let result = solve_level(case, family, level, k, config).map_err(|e| e.context(format!("level {level}")))?;
        let orders = rows.last().map(|prev| {
            let (a, b) = (prev.result.errors.as_array(), result.errors.as_array());
            [order(a[0], b[0]), order(a[1], b[1]), order(a[2], b[2])]
        });
        rows.push(ConvergenceRow { result, orders });
    }
    let span = |f: fn(&LevelResult) -> (usize, usize)| {
        let lo = rows.iter().map(|r| f(&r.result).0).min().unwrap_or(0);
        let hi = rows.iter().map(|r| f(&r.result).1).max().unwrap_or(0);
        (lo, hi)
    };
    Ok(ConvergenceTable {
        case: case.name.clone(),
        family,
        k,
        r1: span(|r| r.r1),
        r2: span(|r| r.r2),
        rows,
    })
}

/// `0.128E-4` style: mantissa in `[0.1, 1)` with three digits.
pub fn format_error(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.3}E+0", x);
    }
    let mut e = x.abs().log10().floor() as i32 + 1;
    let mut m = x / 10f64.powi(e);
    if (m.abs() * 1000.0).round() >= 1000.0 {
        e += 1;
        m = x / 10f64.powi(e);
    } else if m.abs() < 0.1 {
        e -= 1;
        m = x / 10f64.powi(e);
    }
    let sign = if e < 0 { "-" } else { "+" };
    format!("{:.3}E{}{}", m, sign, e.abs())
}

fn degree_label((lo, hi): (usize, usize)) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}-{hi}")
    }
}

impl ConvergenceTable {
    /// Orders of the last row, if there are at least two rows.
    pub fn final_orders(&self) -> Option<[f64; 3]> {
        self.rows.last().and_then(|r| r.orders)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let k = self.k;
        writeln!(
            s,
            "case {}, {} mesh, P{k}/P{k}/P{} elements, r1 = {}, r2 = {}",
            self.case,
            self.family,
            k - 1,
            degree_label(self.r1),
            degree_label(self.r2)
        )
        .unwrap();
        writeln!(s, "{:>4} | {:>10} {:>5} | {:>10} {:>5} | {:>10} {:>5}", "G_i", "|Q0u-u0|", "h^r", "|Dw(Qhu-uh)|", "h^r", "|Ew(Qhu-uh)|", "h^r").unwrap();
        for row in &self.rows {
            let e = row.result.errors.as_array();
            let o = row.orders.map(|o| o.map(|v| format!("{v:.1}"))).unwrap_or_else(|| ["-".into(), "-".into(), "-".into()]);
            writeln!(
                s,
                "{:>4} | {:>10} {:>5} | {:>12} {:>5} | {:>12} {:>5}",
                row.result.level,
                format_error(e[0]),
                o[0],
                format_error(e[1]),
                o[1],
                format_error(e[2]),
                o[2]
            )
            .unwrap();
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,n_elements,h,e_l2,order_l2,e_grad,order_grad,e_ell,order_ell\n");
        for row in &self.rows {
            let r = &row.result;
            let e = r.errors.as_array();
            let o = row.orders.map(|o| o.map(|v| format!("{v:.5e}"))).unwrap_or_default();
            writeln!(
                s,
                "{},{},{:.5e},{:.5e},{},{:.5e},{},{:.5e},{}",
                r.level, r.n_elements, r.h, e[0], o[0], e[1], o[1], e[2], o[2]
            )
            .unwrap();
        }
        s
    }
}
