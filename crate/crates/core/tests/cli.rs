use std::process::{Command, Output};

fn sck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sck")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn gen_sobolev_json() {
    let o = sck(&["gen", "--n", "3", "--a", "1/2", "--c", "-2", "--lambda", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["coeffs"][3], "1/1");
    assert_eq!(v["norm_sq"], "31287/2512");
}

#[test]
fn gen_families_and_formats() {
    let o = sck(&["gen", "--family", "charlier", "--n", "2", "--a", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "k,coeff\n0,9/1\n1,-7/1\n2,1/1\n");
    let o = sck(&["gen", "--family", "limit", "--n", "4", "--a", "2", "--c", "-5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["coeffs"].as_array().unwrap().len(), 5);
}

#[test]
fn decimal_parameters_are_exact() {
    let a = stdout(&sck(&["gen", "--n", "4", "--a", "0.34", "--c", "2", "--lambda", "100"]));
    let b = stdout(&sck(&["gen", "--n", "4", "--a", "17/50", "--c", "2", "--lambda", "1e2"]));
    assert_eq!(a, b);
}

#[test]
fn zeros_csv_schema() {
    let o = sck(&["zeros", "--n", "4", "--a", "17/50", "--c", "2", "--lambda", "100", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,k,eta_k_re,eta_k_im,residual"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let re: f64 = rows[0][2].parse().unwrap();
    assert!((re - 0.00403781).abs() < 5e-9);
}

#[test]
fn sweep_and_lambda0() {
    let o = sck(&["sweep", "--n", "7", "--a", "2", "--c", "-5", "--grid", "1e-10,1e3,12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    assert_eq!(v["monotone"], true);

    let v = json(&sck(&["lambda0", "--n", "7", "--a", "2", "--c", "-5", "--format", "json"]));
    let l0 = v["lambda0_f64"].as_f64().unwrap();
    assert!((l0 / 6.55003e-8 - 1.0).abs() < 1e-4);
}

#[test]
fn table_mode_reports_deviations() {
    let o = sck(&["table", "--id", "t2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["all_within"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["abs_dev"].is_number()));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "fiveterm,ttrr,prop5", "--n-max", "5", "--trials", "3", "--seed", "11"];
    let a = sck(&args);
    let b = sck(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);
}

#[test]
fn corrupted_coefficient_fails_with_exit_one() {
    let o = sck(&["verify", "--suite", "ladder", "--n-max", "3", "--trials", "1", "--corrupt-coefficient"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    assert!(v["failures"].as_array().unwrap().iter().all(|f| f["identity"] == "lowering"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sck(&["gen", "--n", "3", "--a", "-1", "--c", "0", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(sck(&["gen", "--n", "3", "--a", "x/y", "--c", "0", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(sck(&["lambda0", "--n", "3", "--a", "1", "--c", "1/2"]).status.code(), Some(2));
    assert_eq!(sck(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(sck(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sck(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("sck_out_{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = sck(&["lambda0", "--n", "10", "--a", "7", "--c", "-15", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!((v["lambda0_f64"].as_f64().unwrap() / 2.1602e-12 - 1.0).abs() < 1e-4);
}

#[test]
fn precision_override_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_sck"))
        .args(["zeros", "--n", "8", "--a", "1", "--c", "-9", "--lambda", "7e-9", "--format", "csv"])
        .env("SCK_PRECISION_BITS", "256")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let eta2: f64 = stdout(&o).lines().nth(2).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((eta2 - 0.00096038).abs() < 5e-9);
}
