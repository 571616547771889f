use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holeyhex"))
        .args(args)
        .env("HOLEYHEX_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

const H222: &str = r#"{"a":2,"b":2,"c":2,"holes":[]}"#;
const H222_RHOMBUS: &str = r#"{"a":2,"b":2,"c":2,"holes":[[0,-2,0,"L"],[2,0,0,"R"]]}"#;
const H333_SAME_SIDE: &str = r#"{"a":3,"b":3,"c":3,"holes":[[-2,-2,-2,"L"],[2,2,2,"R"]]}"#;

#[test]
fn count_hexagon() {
    let o = run(&["count", "--region", H222]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["count"], "20");
    assert_eq!(v["route"], "kenyon_minor");
    for route in ["kasteleyn", "kenyon", "oracle"] {
        let o = run(&["count", "--region", H222, "--route", route, "--format", "plain"]);
        assert_eq!(stdout(&o).trim(), "20", "{route}");
    }
}

#[test]
fn count_from_file_with_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.json");
    std::fs::write(&path, H222_RHOMBUS).unwrap();
    let o = run(&["count", "--region", path.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["count"], "6");
    let o = run(&["count", "--region", H222_RHOMBUS, "--route", "path", "--format", "plain"]);
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(run(&["count", "--region", "{\"a\":2,"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--region", "/no/such/file.json"]).status.code(), Some(2));
    let bad_triple = r#"{"a":1,"b":1,"c":1,"holes":[[0,0,2,"R"]]}"#;
    assert_eq!(run(&["count", "--region", bad_triple]).status.code(), Some(2));
    let outside = r#"{"a":1,"b":1,"c":1,"holes":[[8,0,-6,"R"]]}"#;
    assert_eq!(run(&["count", "--region", outside]).status.code(), Some(2));
    let o = run(&["kentry", "--dims", "1,1,1", "--white", "0,0,2", "--black", "0,0,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn not_admissible_exit_4() {
    let o = run(&["count", "--region", H333_SAME_SIDE]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["count", "--region", H333_SAME_SIDE, "--signed"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["route"], "kasteleyn_det");
    // The signed value differs from the true count.
    let truth = run(&["count", "--region", H333_SAME_SIDE, "--route", "oracle", "--format", "plain"]);
    assert_ne!(v["count"].as_str().unwrap(), stdout(&truth).trim());
}

#[test]
fn kentry_single_and_all() {
    let o = run(&["kentry", "--dims", "1,1,1", "--white", "0,0,-2", "--black", "0,0,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["numerator"].as_str().unwrap().trim_start_matches('-'), "1");
    assert_eq!(v["denominator"], "2");

    let o = run(&["kentry", "--dims", "1,1,2", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v["entries"].as_array().unwrap();
    assert_eq!(rows.len(), v["rows"].as_array().unwrap().len());
    assert_eq!(rows[0].as_array().unwrap().len(), v["cols"].as_array().unwrap().len());
}

#[test]
fn check_and_negative_control() {
    let o = run(&["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" PASS ")).count(), 8);
    let o = run(&["check", "--inject-sign-flip"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("sign_calibration FAIL"));
}

#[test]
fn correlation_csv() {
    let empty = r#"{"a":1,"b":1,"c":1,"holes":[]}"#;
    let o = run(&["correlation", "--region", empty, "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,separation,ratio_numerator,ratio_denominator"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",0.000000,1,1")));

    let rhombus = r#"{"a":1,"b":1,"c":1,"holes":[[0,-2,0,"L"],[2,0,0,"R"]]}"#;
    let o = run(&["correlation", "--region", rhombus, "--n-max", "3", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // H_111 minus the central rhombus has one tiling out of two.
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",1,2"));
}

#[test]
fn correlation_fit() {
    let empty = r#"{"a":1,"b":1,"c":1,"holes":[]}"#;
    let o = run(&[
        "correlation", "--region", empty, "--n-max", "20", "--separations", "4,8,12", "--fit",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    let fit: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(fit["slope"].is_f64());
    assert_eq!(fit["points"], 3);
}

#[test]
fn oracle_subcommand() {
    let o = run(&["oracle", "--region", H222]);
    assert_eq!(json(&o)["count"], "20");
    let o = run(&["oracle", "--region", H222, "--enumerate", "3"]);
    assert_eq!(json(&o)["tilings"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let args = ["kentry", "--dims", "2,1,2", "--all", "--format", "csv"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_holeyhex"))
        .args(args)
        .env("HOLEYHEX_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&run(&["check", "--format", "json"])), stdout(&run(&["check", "--format", "json"])));
}
