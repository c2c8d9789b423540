use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twograph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn report_text_ledrappier() {
    let out = run(&["report", "--tile", "2,1", "--q", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices: 4"));
    assert!(text.contains("K0 = 0 (order 1)"));
    assert!(text.contains("K1 = 0 (order 1)"));
    assert!(text.contains("simplicity hypotheses: hold"));
}

#[test]
fn report_json_round_trips_byte_identical() {
    let out = run(&["report", "--tile", "3", "--q", "2", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let re_emitted = serde_json::to_string_pretty(&value).unwrap();
    assert_eq!(text.trim_end(), re_emitted);
    assert_eq!(value["ktheory"]["k0_order"], "3");
    assert_eq!(value["ktheory"]["k1_order"], "3");
    assert_eq!(value["simplicity"]["all_hold"], false);
}

#[test]
fn report_is_deterministic() {
    let a = run(&["report", "--tile", "3,1,1", "--q", "2", "--format", "json"]);
    let b = run(&["report", "--tile", "3,1,1", "--q", "2", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_rule_corner_exits_domain_error() {
    let out = run(&[
        "report", "--tile", "2,1", "--q", "4", "--rule", "(0,0):1;(1,0):2;(0,1):1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("invertible corners"));
}

#[test]
fn vertex_limit_exits_resource_error() {
    let out = run(&["report", "--tile", "2,1", "--q", "2", "--limit", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nonzero_trace_sampling_rejected() {
    let out = run(&["sample", "--tile", "2,1", "--q", "2", "--t", "1", "--extent", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_is_seed_deterministic() {
    let args = ["sample", "--tile", "2,1", "--q", "2", "--extent", "3,2", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("valid: all 12 tile placements"));
}

#[test]
fn sample_enumerate_counts_squares() {
    let out = run(&[
        "sample", "--tile", "2,1", "--q", "2", "--extent", "1,1", "--enumerate",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("16 windows of extent (1, 1)"));
}

#[test]
fn table_check_subset_passes() {
    let out = run(&[
        "table", "--cell", "3:2", "--cell", "2,1:3", "--cell", "5:4", "--check",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("ok"));
    assert!(text.contains("255"));
}

#[test]
fn table_q_filter_row_count() {
    let out = run(&["table", "--q", "5", "--format", "json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 9);
}

#[test]
fn reduce_staircase_chain() {
    let out = run(&["reduce", "--tile", "4,3,1,1", "--q", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tile [3, 2, 1]  multiplier 2"));
    assert!(text.contains("tile [2, 1, 1]  multiplier 1"));
    assert!(text.contains("tile [1, 1]  multiplier 2"));
    assert!(text.contains("verified step 3"));
}

#[test]
fn reduce_rejects_flat_tile() {
    let out = run(&["reduce", "--tile", "2,2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn aperiodicity_witnesses_everywhere() {
    let out = run(&[
        "aperiodicity", "--tile", "2,1", "--q", "2", "--m", "1,0", "--n", "0,1",
    ]);
    assert!(out.status.success());
    let t = stdout(&out);
    assert_eq!(t.matches("witness").count(), 4);
}

#[test]
fn aperiodicity_periodic_rule_is_conclusive() {
    let out = run(&[
        "aperiodicity", "--tile", "2,1", "--q", "2",
        "--rule", "(0,0):0;(1,0):1;(0,1):1",
        "--m", "0,1", "--n", "1,0", "--vertex", "all",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("periodic"));
}

#[test]
fn connect_reports_path() {
    let out = run(&[
        "connect", "--tile", "2,1", "--q", "2", "--from", "000", "--to", "110",
    ]);
    assert!(out.status.success());
    let t = stdout(&out);
    assert!(t.contains("degree (1, 1)"));
    let out = run(&[
        "connect", "--tile", "2,1", "--q", "2", "--from", "#0", "--to", "#3",
    ]);
    assert!(out.status.success());
}

#[test]
fn connect_unknown_vertex() {
    let out = run(&[
        "connect", "--tile", "2,1", "--q", "2", "--from", "001", "--to", "000",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
