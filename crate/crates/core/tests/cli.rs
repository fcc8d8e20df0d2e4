use std::path::Path;
use std::process::{Command, Output};

use zerofree::bundled;
use zerofree::polyfile::read_poly;

fn zerofree(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerofree"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn objective_of_bundled_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["objective", "f16"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("objective: 34.49997"));
    let o = zerofree(&["objective", "k8"], dir.path());
    assert!(stdout(&o).contains("objective: 34.544"));
}

#[test]
fn objective_rejects_non_member() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.poly");
    std::fs::write(&path, "n 2\na 0 1\na 1 0.5\na 2 0.1\n").unwrap();
    let o = zerofree(&["objective", path.to_str().unwrap()], dir.path());
    assert!(!o.status.success());
}

#[test]
fn plot_rows_and_nonnegativity() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["plot", "f40", "--points", "500"], dir.path());
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("plot.csv")).unwrap();
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (p, v) = l.split_once(',').unwrap();
            (p.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().all(|&(_, v)| v >= -1e-12));
    let (phi, v) = rows[rows.len() - 1];
    assert_eq!(phi, std::f64::consts::PI);
    let alt: f64 = bundled::f40()
        .cosine
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 0 { *a } else { -a })
        .sum();
    assert!((v - alt).abs() < 1e-12);
}

#[test]
fn anneal_is_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["anneal", "--degree", "4", "--chains", "4", "--seed", "1", "--trials", "200", "--step-min", "1e-2"];
    let a = zerofree(&args, d1.path());
    let b = zerofree(&args, d2.path());
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a).replace(d1.path().to_str().unwrap(), ""), stdout(&b).replace(d2.path().to_str().unwrap(), ""));
    let log1 = std::fs::read_to_string(d1.path().join("anneal_n4.csv")).unwrap();
    let log2 = std::fs::read_to_string(d2.path().join("anneal_n4.csv")).unwrap();
    assert_eq!(log1, log2);
    let p = read_poly(d1.path().join("best_n4.poly")).unwrap();
    assert_eq!(p.degree(), 4);
}

#[test]
fn anneal_degree_one_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["anneal", "--degree", "1"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn tables_default_and_zero_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["tables", "--only", "f16"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("iteration trace: 7/7 rows match"));
    let o = zerofree(&["tables", "--only", "f16", "--tol", "0"], dir.path());
    assert!(!o.status.success());
    assert!(stdout(&o).contains("mismatch"));
}

#[test]
fn tables_f40_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["tables", "--only", "f40"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("V_n table: 1/1 rows match"));
}

#[test]
fn r0_writes_trace_and_theorem_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["r0", "f16"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("5.573412"));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("R,r,eta0_e3,eta1_e3,kappa,delta,R0"));
    assert_eq!(trace.lines().count(), 8);
}

#[test]
fn r0_needs_zero_data_beyond_published_height() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["r0", "f16", "--t0", "2e5"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn sweep_single_point_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["sweep", "f16", "--from", "3.06e10", "--to", "3.06e10", "--count", "1", "--theta", "1.85573"], dir.path());
    let text = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(text.contains("degenerate"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn sweep_rejects_heights_below_t0() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["sweep", "f16", "--from", "1e3", "--to", "3e10", "--count", "2"], dir.path());
    let text = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(text.contains("1000"), "{text}");
}

#[test]
fn bundled_files_match_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerofree(&["bundled"], dir.path());
    assert!(o.status.success());
    for (name, poly) in bundled::all() {
        let read = read_poly(dir.path().join(format!("{name}.poly"))).unwrap();
        for (x, y) in read.cosine.coeffs().iter().zip(poly.cosine.coeffs()) {
            assert!((x - y).abs() <= 1e-15 * y.abs().max(1e-300), "{name}");
        }
    }
}

#[test]
fn shipped_data_files_match_constants() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for (name, poly) in bundled::all() {
        let read = read_poly(data.join(format!("{name}.poly"))).unwrap();
        assert_eq!(read.degree(), poly.degree(), "{name}");
        for (x, y) in read.cosine.coeffs().iter().zip(poly.cosine.coeffs()) {
            assert!((x - y).abs() <= 1e-15 * y.abs().max(1e-300), "{name}");
        }
    }
}
