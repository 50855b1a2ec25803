use std::fs;
use std::process::{Command, Output};

fn tri_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tri-lab"))
        .args(args)
        .env("TRI_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_writes_matrix_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.mtx");
    let o = tri_lab(&["gen", "laplacian5pt", "16", "16", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["n"], 256);
    assert!(fs::read_to_string(&out).unwrap().starts_with("%%MatrixMarket"));
}

#[test]
fn gen_rejects_unknown_generator() {
    let o = tri_lab(&["gen", "cube", "2", "2"]);
    assert!(!o.status.success());
}

#[test]
fn reorder_reports_colors_and_er() {
    let o = tri_lab(&["reorder", "--matrix", "laplacian5pt:4x4", "--ordering", "bmc", "--bs", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n_c: 2"));

    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("layout.txt");
    let o = tri_lab(&[
        "reorder", "--matrix", "laplacian5pt:9x5", "--ordering", "hbmc", "--bs", "4", "--w", "2",
        "--emit", dump.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ER condition: holds"));
    let text = fs::read_to_string(&dump).unwrap();
    assert_eq!(text.lines().count(), 46);
    let mut positions: Vec<usize> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(4).unwrap().parse().unwrap())
        .collect();
    positions.sort_unstable();
    positions.dedup();
    assert_eq!(positions.len(), 45);
}

#[test]
fn reorder_warns_on_oversized_block() {
    let o = tri_lab(&["reorder", "--matrix", "laplacian5pt:3x3", "--ordering", "bmc", "--bs", "100"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(stdout(&o).contains("n_c: 1"));
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ident = dir.path().join("i.mtx");
    fs::write(
        &ident,
        "%%MatrixMarket matrix coordinate real general\n3 3 3\n1 1 1\n2 2 1\n3 3 1\n",
    )
    .unwrap();
    let o = tri_lab(&["solve", "--matrix", ident.to_str().unwrap(), "--ordering", "natural"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["iterations"], 1);

    let o = tri_lab(&["solve", "--matrix", "laplacian5pt:32x32", "--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["converged"], false);

    let o = tri_lab(&["solve", "--matrix", dir.path().join("missing.mtx").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_bmc_and_hbmc_iterations_agree() {
    let iters = |ordering: &str| {
        let o = tri_lab(&[
            "solve", "--matrix", "laplacian5pt:64x64", "--ordering", ordering, "--bs", "8", "--w", "4",
        ]);
        assert!(o.status.success());
        let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        rep["iterations"].as_i64().unwrap()
    };
    assert!((iters("bmc") - iters("hbmc")).abs() <= 1);
}

#[test]
fn bench_writes_rows_and_medians() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.toml");
    fs::write(
        &plan,
        r#"
matrix = "laplacian5pt:20x20"
repetitions = 3

[[config]]
ordering = "bmc"
bs = 4

[[config]]
ordering = "hbmc"
bs = 4
w = 2
format = "sell"
"#,
    )
    .unwrap();
    let csv_path = dir.path().join("out.csv");
    let o = tri_lab(&["bench", plan.to_str().unwrap(), "--out", csv_path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    let iter_col = headers.iter().position(|h| h == "iterations").unwrap();
    let rep_col = headers.iter().position(|h| h == "repetition").unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows.iter().filter(|r| &r[rep_col] == "median").count(), 2);
    let first: i64 = rows[0][iter_col].parse().unwrap();
    let last: i64 = rows[7][iter_col].parse().unwrap();
    assert!((first - last).abs() <= 1);
}

#[test]
fn bench_rejects_empty_plan() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("empty.toml");
    fs::write(&plan, "").unwrap();
    let o = tri_lab(&["bench", plan.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn check_passes_on_grid_and_fails_on_fault() {
    let o = tri_lab(&["check", "--matrix", "laplacian5pt:12x10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("check: 36/36 passed"));

    let o = tri_lab(&["check", "--matrix", "laplacian5pt:12x10", "--bs", "4", "--w", "2", "--inject-fault"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("er_condition"));
}

#[test]
fn identical_runs_are_deterministic() {
    let run = || {
        let o = tri_lab(&["solve", "--matrix", "laplacian5pt:30x30", "--ordering", "hbmc", "--bs", "4"]);
        let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        (rep["iterations"].clone(), rep["residual_history"].clone())
    };
    assert_eq!(run(), run());
}
