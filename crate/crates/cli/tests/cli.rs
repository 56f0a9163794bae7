use exord::distributions::parse_model;
use exord::expectiles::{expectile, ier};
use std::process::{Command, Output};

fn exord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exord"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parse a single CSV table into its header and rows.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: '{s}'"))
}

#[test]
fn eval_prints_library_values() {
    let o = exord(&["eval", "t(5)", "--alpha", "0.25", "--full"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("# model = t(5)"));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["alpha", "e_alpha", "e_1-alpha", "q_alpha", "q_1-alpha", "ier", "iqr", "mad"]);
    assert_eq!(rows.len(), 1);
    let m = parse_model("t(5)").unwrap();
    assert_eq!(num(&rows[0][1]), expectile(&m, 0.25).unwrap());
    assert_eq!(num(&rows[0][2]), expectile(&m, 0.75).unwrap());
    assert_eq!(num(&rows[0][5]), ier(&m, 0.25).unwrap());

    let o = exord(&["eval", "lomax(3,1.7320508)"]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&stdout(&o)).1.len(), 3);
}

#[test]
fn moment_and_parse_errors_exit_with_two() {
    let o = exord(&["eval", "t(1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("t(1) has no finite mean"), "{}", stderr(&o));

    let o = exord(&["eval", "lomax(3,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position"));

    let o = exord(&["eval", "t(5)", "--alpha", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn unknown_flags_are_rejected() {
    let o = exord(&["table1", "--colour", "red"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    let o = exord(&["eval", "t(5)", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table1_shape_and_round_trip() {
    let csv3 = exord(&["table1"]);
    assert!(csv3.status.success());
    let (header, rows) = csv_rows(&stdout(&csv3));
    assert_eq!(header, ["model", "sd", "E0.15", "E0.25", "E0.35", "d", "g", "Q0.15", "Q0.25", "Q0.35"]);
    assert_eq!(rows.len(), 15);
    assert_eq!(rows[0][0], "t(3)");
    assert_eq!(rows[0][1], "", "t(3) has no finite sd ASV");
    assert_eq!(rows[2][1], "2.000");

    // --full CSV and JSON carry the same numbers
    let full = exord(&["table1", "--full"]);
    let json = exord(&["table1", "--format", "json"]);
    let (_, full_rows) = csv_rows(&stdout(&full));
    let j: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    for (i, row) in full_rows.iter().enumerate() {
        for (k, col) in header.iter().enumerate().skip(1) {
            let from_json = j[i][col].as_f64();
            let from_csv = (!row[k].is_empty()).then(|| num(&row[k]));
            assert_eq!(from_csv, from_json, "row {i} column {col}");
        }
    }
}

#[test]
fn table2_marks_best_estimator() {
    let o = exord(&["table2"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header.last().unwrap(), "best");
    let best: Vec<&str> = rows.iter().map(|r| r[10].as_str()).collect();
    assert_eq!(best[0], "Q0.15");
    assert_eq!(best[14], "sd");
    for r in &rows {
        let k = header.iter().position(|h| h == &r[10]).unwrap();
        assert_eq!(r[k], "1.000");
    }
}

#[test]
fn table3_outputs_are_byte_stable() {
    let a = exord(&["table3"]);
    let b = exord(&["table3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = csv_rows(&stdout(&a));
    assert_eq!(header, ["alpha", "beta", "m3", "m4", "sd", "E0.25", "d", "g", "Q0.25"]);
    assert_eq!(rows.len(), 9);
    let sym = exord(&["table3", "--symmetric-iqr"]);
    let (_, srows) = csv_rows(&stdout(&sym));
    // symmetric rows agree, skewed rows differ only in the Q column
    assert_eq!(rows[0], srows[0]);
    assert_ne!(rows[1][8], srows[1][8]);
    assert_eq!(rows[1][..8], srows[1][..8]);
}

#[test]
fn normal_sare_milestones() {
    let o = exord(&["normal-sare"]);
    let (_, rows) = csv_rows(&stdout(&o));
    let vals: Vec<(f64, f64)> = rows.iter().map(|r| (num(&r[1]), num(&r[2]))).collect();
    assert!((vals[0].0 - 0.368).abs() <= 0.002);
    assert!((vals[1].0 - 0.652).abs() <= 0.002 && (vals[1].1 - 0.0692).abs() <= 0.001);
    assert!((vals[2].0 - 0.934).abs() <= 0.002);
    assert!((vals[3].0 - 0.967).abs() <= 0.002 && (vals[3].1 - 0.118).abs() <= 0.002);
}

#[test]
fn figure2_grid_and_ordering() {
    let o = exord(&["figure2", "--full"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["alpha", "tau2_Q", "tau2_E"]);
    assert_eq!(rows.len(), 97);
    for r in &rows {
        let (a, q, e) = (num(&r[0]), num(&r[1]), num(&r[2]));
        if a > 0.02 && a < 0.48 {
            assert!(e < q, "alpha {a}: {e} vs {q}");
        }
    }
}

#[test]
fn lomax_case_writes_both_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lomax.csv");
    let o = exord(&["lomax-case", "--full", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains(&format!("# EX = {}", 3f64.sqrt() / 2.0)), "{err}");
    assert!(err.contains("# EY = 1\n"));
    assert!(stdout(&o).is_empty());

    let ier_text = std::fs::read_to_string(dir.path().join("lomax-ier.csv")).unwrap();
    let (_, rows) = csv_rows(&ier_text);
    assert_eq!(rows.len(), 99);
    assert!(rows.iter().all(|r| num(&r[2]) - num(&r[1]) > 0.0));

    let comp_text = std::fs::read_to_string(dir.path().join("lomax-composite.csv")).unwrap();
    let (_, rows) = csv_rows(&comp_text);
    assert_eq!(rows.len(), 201);
    let ys: Vec<f64> = rows.iter().map(|r| num(&r[1])).collect();
    assert!(ys.windows(2).all(|w| w[1] - w[0] > -1e-9));
}

#[test]
fn order_reports_witness() {
    let o = exord(&["order", "disp", "lomax(3,1.7320508075688772)", "lomax(2,1)"]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows[0][1], "Fails");
    assert!(rows[0][5].contains("u="));
    let o = exord(&["order", "we-disp", "lomax(3,1.7320508075688772)", "lomax(2,1)", "--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j[0]["verdict"], "Holds");
    assert!(stderr(&o).contains("# order = we-disp"));
}

#[test]
fn clt_config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.kv");
    std::fs::write(&cfg, "model = normal\nn = 400\nreplications = 40\nseed = 9\n").unwrap();
    let args = ["clt", "--config", cfg.to_str().unwrap(), "--full", "--estimates"];
    let a = exord(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, exord(&args).stdout);
    assert!(stderr(&a).contains("# replications = 40"));
    let text = stdout(&a);
    let mut parts = text.split("\n\n");
    let (_, summary) = csv_rows(parts.next().unwrap());
    assert_eq!(summary[0][1], "E0.25");
    let (_, est) = csv_rows(parts.next().unwrap());
    assert_eq!(est.len(), 40);

    let o = exord(&["clt", "--config", cfg.to_str().unwrap(), "--seed", "10", "--estimator", "mad"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("# seed = 10"));
    assert!(stderr(&o).contains("# estimator = mad"));

    std::fs::write(&cfg, "n = 1\n").unwrap();
    let o = exord(&["clt", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n must be at least 2"));
}
