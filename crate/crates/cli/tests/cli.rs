use std::process::{Command, Output};

fn cyclewalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclewalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<f64>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

fn header(out: &Output) -> String {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

#[test]
fn single_node_series_decays_toward_the_limit() {
    let out = cyclewalk(&[
        "simulate",
        "--d",
        "24",
        "--initial",
        "single:0",
        "--t-max",
        "5000",
        "--what",
        "tvd_series",
    ]);
    assert!(out.status.success());
    assert_eq!(header(&out), "t,delta");
    let rows = rows(&out);
    assert_eq!(rows.len(), 5001);
    assert!((rows[0][1] - 23.0 / 24.0).abs() < 1e-11);
    assert!((rows[5000][1] - 0.054).abs() < 0.005);
}

#[test]
fn pair_series_is_constant() {
    let out = cyclewalk(&[
        "simulate",
        "--d",
        "24",
        "--initial",
        "pair:3,0",
        "--t-max",
        "200",
    ]);
    assert!(out.status.success());
    for row in rows(&out) {
        assert_eq!(row[1], 0.204124145232);
    }
}

#[test]
fn quad_series_settles_above_its_start() {
    let out = cyclewalk(&[
        "simulate",
        "--d",
        "24",
        "--initial",
        "quad:3,0",
        "--t-max",
        "1000",
    ]);
    let rows = rows(&out);
    let tail: f64 = rows[900..].iter().map(|r| r[1]).sum::<f64>() / 101.0;
    assert!(tail > 4.0 * rows[0][1]);
}

#[test]
fn figure_presets() {
    let one = cyclewalk(&["figure", "1"]);
    assert_eq!(header(&one), "t,delta");
    let last = rows(&one).pop().unwrap();
    assert_eq!(last[0], 5000.0);
    assert!((last[1] - 0.054).abs() < 0.005);

    let two = cyclewalk(&["figure", "2"]);
    assert_eq!(header(&two), "t,delta,analytic");
    let rows2 = rows(&two);
    assert_eq!(rows2.len(), 201);
    assert!(rows2.iter().all(|r| (r[1] - r[2]).abs() < 1e-9));

    let three = cyclewalk(&["figure", "3"]);
    assert_eq!(header(&three), "t,delta,analytic");
    let rows3 = rows(&three);
    assert_eq!(rows3.len(), 1001);
    // fields carry 12 significant digits, so compare at that resolution
    assert!(rows3.iter().all(|r| (r[1] - r[2]).abs() < 1e-7));
}

#[test]
fn distribution_outputs() {
    let lim = cyclewalk(&[
        "simulate",
        "--d",
        "24",
        "--initial",
        "single:0",
        "--what",
        "limiting_distribution",
    ]);
    assert_eq!(header(&lim), "v,p");
    let lim = rows(&lim);
    assert_eq!(lim.len(), 24);
    assert!((lim.iter().map(|r| r[1]).sum::<f64>() - 1.0).abs() < 1e-10);

    let avg = cyclewalk(&[
        "simulate",
        "--d",
        "12",
        "--initial",
        "pair:1,1,upper",
        "--t-max",
        "10",
        "--what",
        "averaged_distribution",
    ]);
    assert_eq!(header(&avg), "v,p");

    let cmp = cyclewalk(&[
        "simulate",
        "--d",
        "24",
        "--initial",
        "quad:3,0",
        "--t-max",
        "40",
        "--what",
        "analytic_comparison",
    ]);
    assert_eq!(header(&cmp), "v,p,analytic");
    assert!(rows(&cmp).iter().all(|r| (r[1] - r[2]).abs() < 1e-10));
}

#[test]
fn writes_to_file_and_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = cyclewalk(&["figure", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        cyclewalk(&["figure", "2"]).stdout
    );
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cyclewalk(args).status.code();
    assert_eq!(
        code(&["simulate", "--d", "7", "--initial", "single:0"]),
        Some(2)
    );
    assert_eq!(
        code(&["simulate", "--d", "24", "--initial", "single:24"]),
        Some(2)
    );
    assert_eq!(
        code(&["simulate", "--d", "24", "--initial", "quad:0,0"]),
        Some(2)
    );
    assert_eq!(
        code(&["simulate", "--d", "24", "--initial", "pair:1"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "simulate",
            "--d",
            "24",
            "--initial",
            "single:0",
            "--t-max",
            "10000001"
        ]),
        Some(2)
    );
    assert_eq!(code(&["figure", "0"]), Some(2));
    assert_eq!(
        code(&["figure", "1", "--out", "/nonexistent-dir/out.csv"]),
        Some(1)
    );

    let err = cyclewalk(&["simulate", "--d", "7", "--initial", "single:0"]);
    assert_eq!(String::from_utf8(err.stderr).unwrap().lines().count(), 1);
}

#[test]
fn verify_passes_and_detects_a_corrupted_eigenvalue() {
    let ok = cyclewalk(&["verify"]);
    let report = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(ok.status.code(), Some(0), "{report}");
    assert!(report.contains("PASS [analytic] pair sum equals pair closed form"));

    let bad = cyclewalk(&["verify", "--fault", "flip-eigenvalue-sign"]);
    assert_eq!(bad.status.code(), Some(3));
    let report = String::from_utf8(bad.stdout).unwrap();
    let failures: Vec<&str> = report.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failures.len(), 1);
    assert!(failures[0].contains("eigen-relation"));
}
