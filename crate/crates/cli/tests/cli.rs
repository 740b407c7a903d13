use std::path::Path;
use std::process::{Command, Output};

use wgfem::mesh::MeshFamily;
use wgfem::study::{run_convergence, ModelCase, StudyConfig};

fn wgfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgfem")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
        .to_string()
}

#[test]
fn mesh_counts() {
    let o = wgfem(&["mesh", "--family", "pent", "--level", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "V=6 E=7 F=2");

    let o = wgfem(&["mesh", "--family", "tri", "--level", "2"]);
    assert_eq!(stdout(&o).trim(), "V=9 E=16 F=8");
}

#[test]
fn mesh_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mesh.txt");
    let o = wgfem(&["mesh", "--level", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!std::fs::read_to_string(&path).unwrap().is_empty());
}

#[test]
fn bad_level_is_a_config_error() {
    let o = wgfem(&["mesh", "--level", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1..=12"), "{}", stderr(&o));
}

#[test]
fn indefinite_kappa_is_rejected() {
    let o = wgfem(&["solve", "--case", "custom", "--u", "2,0,1", "--kappa", "1 2 1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("positive definite"), "{}", stderr(&o));
}

#[test]
fn coefficients_need_custom_case() {
    let o = wgfem(&["solve", "--mu", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_breakdown_exit_code() {
    let o = wgfem(&["solve", "--family", "pent", "--level", "2", "--r1", "2", "--r2", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("pivot"), "{}", stderr(&o));
}

#[test]
fn solve_matches_library_bitwise() {
    let o = wgfem(&["solve", "--family", "tri", "--level", "3", "--k", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    let table = run_convergence(&ModelCase::s1(), MeshFamily::Triangular, 2, 3..=3, &StudyConfig::default()).unwrap();
    let ell: f64 = report_value(&report, "e_ell").parse().unwrap();
    assert_eq!(ell.to_bits(), table.rows[0].result.errors.ell.to_bits());
    assert_eq!(report_value(&report, "r1"), "6");
    assert_eq!(report_value(&report, "r2"), "4");
}

#[test]
fn homogeneous_custom_case_has_zero_error() {
    let o = wgfem(&["solve", "--case", "custom", "--u", "0,0,0", "--level", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    for key in ["e_l2", "e_grad", "e_ell"] {
        assert_eq!(report_value(&report, key).parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# pentagons\nfamily = pent\nlevel = 1\nk = 3\n").unwrap();
    let o = wgfem(&["solve", "--config", cfg.to_str().unwrap(), "--k", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert_eq!(report_value(&report, "family"), "pent");
    assert_eq!(report_value(&report, "k"), "2");

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = wgfem(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

fn convergence_csv(dir: &Path, threads: &str) -> String {
    let path = dir.join(format!("conv{threads}.csv"));
    let o = wgfem(&[
        "convergence", "--family", "pent", "--k", "2", "--levels", "1:3", "--threads", threads, "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn convergence_csv_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let one = convergence_csv(dir.path(), "1");
    let two = convergence_csv(dir.path(), "2");
    assert_eq!(one, two);
    let lines: Vec<_> = one.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("level,n_elements,h,e_l2"));
}

#[test]
fn convergence_table_output() {
    let o = wgfem(&["convergence", "--k", "2", "--levels", "1:3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("P2/P2/P1"), "{text}");
    assert_eq!(text.lines().count(), 5);
}
