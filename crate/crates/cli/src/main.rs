mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wgfem::mesh::{write_mesh, PolytopalMesh};
use wgfem::study::{run_convergence, solve_mesh, LevelResult};
use wgfem::{Error, Result};

use config::{parse_config_file, Options, OutputFormat, RunConfig};

/// Weak Galerkin solver for (−∇·(κ∇) + μ)² u = f on polygonal meshes of the unit square.
#[derive(Debug, Parser)]
#[command(name = "wgfem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a mesh and print its vertex/edge/element counts
    Mesh(Options),
    /// Solve one manufactured-solution problem and report errors
    Solve(Options),
    /// Run a convergence study over a range of levels
    Convergence(Options),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Io(_) => 2,
        Error::Solver(_) => 3,
        Error::Mesh(_) => 4,
    }
}

fn load(opts: Options) -> Result<RunConfig> {
    let opts = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
            let file = parse_config_file(&text)?;
            opts.merge_file(&file)?
        }
        None => opts,
    };
    let cfg = RunConfig::resolve(&opts)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))?;
    }
    Ok(cfg)
}

fn write_out(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_mesh(cfg: &RunConfig) -> Result<()> {
    let mesh = cfg.family.generate(cfg.level)?;
    let violations = mesh.validate();
    if let Some(v) = violations.first() {
        return Err(Error::Mesh(format!("generated mesh failed validation: {v}")));
    }
    if let Some(path) = &cfg.out {
        let mut w = BufWriter::new(File::create(path)?);
        write_mesh(&mesh, &mut w)?;
        w.flush()?;
    }
    println!("V={} E={} F={}", mesh.num_vertices(), mesh.num_edges(), mesh.num_elements());
    Ok(())
}

fn degree_label((lo, hi): (usize, usize)) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}..{hi}")
    }
}

fn solve_report(cfg: &RunConfig, mesh: &PolytopalMesh, r: &LevelResult) -> String {
    let kappa = cfg.case.kappa;
    let e = &r.errors;
    let lines = [
        ("family", cfg.family.to_string()),
        ("level", r.level.to_string()),
        ("k", cfg.k.to_string()),
        ("case", cfg.case.name.clone()),
        ("kappa", format!("{} {} {}", kappa.a, kappa.b, kappa.c)),
        ("mu", cfg.case.mu.to_string()),
        ("r1", degree_label(r.r1)),
        ("r2", degree_label(r.r2)),
        ("vertices", mesh.num_vertices().to_string()),
        ("edges", mesh.num_edges().to_string()),
        ("elements", r.n_elements.to_string()),
        ("h", format!("{:e}", r.h)),
        ("dofs", r.n_dofs.to_string()),
        ("unknowns", r.n_unknowns.to_string()),
        ("solver", cfg.study.solver.to_string()),
        ("condensed", cfg.study.condense.to_string()),
        ("iterations", r.stats.iterations.to_string()),
        ("relative_residual", format!("{:e}", r.stats.relative_residual)),
        ("e_l2", format!("{:e}", e.l2)),
        ("e_grad", format!("{:e}", e.grad)),
        ("e_ell", format!("{:e}", e.ell)),
        ("time_setup_s", format!("{:.3}", r.timings.setup.as_secs_f64())),
        ("time_assemble_s", format!("{:.3}", r.timings.assemble.as_secs_f64())),
        ("time_solve_s", format!("{:.3}", r.timings.solve.as_secs_f64())),
    ];
    lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn cmd_solve(cfg: &RunConfig) -> Result<()> {
    let mesh = cfg.family.generate(cfg.level)?;
    let result = solve_mesh(&cfg.case, &mesh, cfg.k, &cfg.study, cfg.dump_system.as_deref())?;
    let report = solve_report(cfg, &mesh, &result);
    print!("{report}");
    if let Some(path) = &cfg.out {
        write_out(path, &report)?;
    }
    Ok(())
}

fn cmd_convergence(cfg: &RunConfig) -> Result<()> {
    let table = run_convergence(&cfg.case, cfg.family, cfg.k, cfg.levels.clone(), &cfg.study)?;
    let csv = table.to_csv();
    let mut stdout = io::stdout().lock();
    match cfg.format {
        OutputFormat::Table => stdout.write_all(table.to_text().as_bytes())?,
        OutputFormat::Csv => stdout.write_all(csv.as_bytes())?,
    }
    if let Some(path) = &cfg.out {
        write_out(path, &csv)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mesh(o) => cmd_mesh(&load(o)?),
        Command::Solve(o) => cmd_solve(&load(o)?),
        Command::Convergence(o) => cmd_convergence(&load(o)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
