use std::process::{Command, Output};

use serde_json::Value;

fn hitchin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hitchin"))
        .args(args)
        .env_remove("HITCHIN_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn braid_relations_pass_at_level_three() {
    let out = hitchin(&["verify-braid", "--g", "2", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "report_v1");
    assert_eq!(v["checks"][0]["checked"], 165);
}

#[test]
fn theta_graph_count_at_level_five() {
    let v = json(&hitchin(&["verlinde", "--graph", "theta", "--k", "5"]));
    assert_eq!(v["checks"][0]["count"], 56);
    assert_eq!(v["status"], "pass");
}

#[test]
fn separating_spectrum_is_exact() {
    let v = json(&hitchin(&["spectrum-separating", "--k", "2"]));
    let expected: Value = serde_json::from_str(
        r#"[{"num": "0", "den": "1", "mult": 9}, {"num": "1", "den": "2", "mult": 1}]"#,
    )
    .unwrap();
    assert_eq!(v["checks"][0]["items"], expected);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify-kummer", "--seed", "7"];
    let a = hitchin(&args);
    let b = hitchin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_the_report() {
    let base = hitchin(&["verify-invariance", "--k", "2"]);
    let pinned = Command::new(env!("CARGO_BIN_EXE_hitchin"))
        .args(["verify-invariance", "--k", "2"])
        .env("HITCHIN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(base.stdout, pinned.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(hitchin(&["verify-spin", "--bogus"]).status.code(), Some(2));
    assert_eq!(hitchin(&["verify-spin", "--g", "0"]).status.code(), Some(2));
    assert_eq!(hitchin(&["holonomy", "--steps", "4"]).status.code(), Some(2));
    assert_eq!(hitchin(&["verify-kummer", "--g", "3"]).status.code(), Some(2));
}

#[test]
fn single_dilation_loop_is_reported_as_failure() {
    let out = hitchin(&["holonomy", "--loop", "dilation", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "fail");
    let twice = hitchin(&["holonomy", "--loop", "dilation-twice", "--k", "2"]);
    assert_eq!(twice.status.code(), Some(0));
}

#[test]
fn output_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("hitchin-report-{}.json", std::process::id()));
    let out = hitchin(&["verify-r123", "--k", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify-r123");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn timings_are_opt_in() {
    assert!(json(&hitchin(&["verlinde"])).get("timings_ms").is_none());
    assert!(json(&hitchin(&["verlinde", "--timings"]))["timings_ms"].is_object());
}
