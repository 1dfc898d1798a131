use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use periodlab::periods::PeriodMatrixReport;
use periodlab_cli::{run_text, CliError, Overrides};
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn with_command(text: &str, command: &str) -> String {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["command"] = json!(command);
    v.to_string()
}

fn bin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_periodlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(text: &str) -> Value {
    let out = run_text(text, &Overrides::default()).unwrap();
    serde_json::from_str::<Value>(&out).unwrap()["report"].clone()
}

#[test]
fn dim_on_noncm_fixture() {
    let r = report(&with_command(&fixture("example_noncm.json"), "dim"));
    assert_eq!(r["dimension"]["delta_total"]["value"], 11);
    let r = report(&with_command(&fixture("example_cm.json"), "dim"));
    assert_eq!(r["dimension"]["delta_total"]["value"], 9);
}

#[test]
fn verify_on_noncm_fixture() {
    let out = bin(&["--digits", "25"], &fixture("example_noncm.json"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 512);
    let r = &v["report"];
    assert_eq!(r["rank"]["rank"], 11);
    assert_eq!(r["verdict"], "consistent");
    assert!(r["rank"]["negative_bound"].as_u64().unwrap() >= 1_000_000);
}

#[test]
fn hyper_half() {
    let job = json!({"schema": "periodlab/1", "command": "hyper", "input": {"lambda": "1/2"}});
    let r = report(&job.to_string());
    assert_eq!(r["within_tolerance"], true);
    assert_eq!(r["sign_resolved"], "+");
    assert!(r["F_value"]["re"].as_str().unwrap().starts_with("1.18034059901609622604"));
}

#[test]
fn genus0_siegel() {
    let r = report(&fixture("siegel.json"));
    assert!(r["value"]["re"].as_str().unwrap().starts_with("8.356488482647210533"));
    assert_eq!(r["verdict"]["status"], "nonzero");
    assert_eq!(r["parts"].as_array().unwrap().len(), 3);
}

#[test]
fn relate_modes() {
    let r = report(&fixture("baker_logs.json"));
    assert_eq!(r["mode"], "rank");
    assert_eq!(r["rank"], 2);
    let job = json!({
        "schema": "periodlab/1", "command": "relate", "height_bound": 100,
        "input": {"mode": "find", "values": [{"log": 2}, {"log": 3}, {"log": 6}]}
    });
    let r = report(&job.to_string());
    let c: Vec<i64> = serde_json::from_value(r["relation"]["coefficients"].clone()).unwrap();
    assert!(c == vec![1, 1, -1] || c == vec![-1, -1, 1]);
    let job = json!({
        "schema": "periodlab/1", "command": "relate", "height_bound": 100,
        "input": {"mode": "find", "values": [{"log": 2}, {"log": 3}, {"two_pi_i": 1}, "1"]}
    });
    assert_eq!(report(&job.to_string())["relation"], Value::Null);
}

#[test]
fn vanish_residue_loops() {
    let job = json!({
        "schema": "periodlab/1", "command": "vanish", "precision_bits": 128,
        "input": {
            "curve": {"g2": 4, "g3": -4},
            "form": {"a": 0, "b": 0, "thirds": [{"coeff": 1, "point": {"x": 1, "y": 2}, "label": "P"}]},
            "chain": {"legs": [
                {"coeff": 1, "start": {"x": 0, "y": 2}, "end": {"x": 0, "y": 2}, "windings": {"infinity": 1}},
                {"coeff": 1, "start": {"x": 0, "y": 2}, "end": {"x": 0, "y": 2}, "windings": {"P": 1}}
            ]}
        }
    });
    let r = report(&job.to_string());
    assert_eq!(r["status"], "nontrivial-zero");
    assert_eq!(r["reason"], "third-kind");
}

#[test]
fn periods_report_round_trips() {
    let text =
        run_text(&fixture("example_cm.json"), &Overrides { digits_out: Some(20), ..Overrides::default() }).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let pm: PeriodMatrixReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&pm).unwrap(), v["report"]);
    assert_eq!(pm.rows.len(), pm.entries.len());
}

#[test]
fn output_is_byte_identical() {
    for f in ["example_cm.json", "siegel.json", "baker_logs.json"] {
        let a = bin(&[], &fixture(f));
        let b = bin(&[], &fixture(f));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{f}");
    }
}

#[test]
fn schema_errors_name_the_path() {
    let bad = fixture("example_noncm.json").replace("\"g2\": \"28/3\"", "\"g2\": [1]");
    let out = bin(&[], &bad);
    assert_eq!(out.status.code(), Some(3));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "schema");
    assert_eq!(e["path"], "input.motive.blocks[0].curve.g2");

    let wrong = fixture("siegel.json").replace("periodlab/1", "periodlab/0");
    assert_eq!(bin(&[], &wrong).status.code(), Some(3));
    assert_eq!(bin(&[], "{\"schema\": \"periodlab/1\", \"command\": \"fly\", \"input\": {}}").status.code(), Some(3));
    match run_text(&fixture("siegel.json"), &Overrides { precision_bits: Some(32), ..Overrides::default() }) {
        Err(CliError::Schema { path, .. }) => assert_eq!(path, "precision_bits"),
        other => panic!("{other:?}"),
    }
    match run_text(&fixture("siegel.json"), &Overrides { digits_out: Some(200), ..Overrides::default() }) {
        Err(CliError::Schema { path, .. }) => assert_eq!(path, "digits_out"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn engine_errors_exit_two() {
    let job = json!({"schema": "periodlab/1", "command": "hyper", "input": {"lambda": 1}});
    let out = bin(&[], &job.to_string());
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["kind"], "Domain");
}

#[test]
fn flags_override_the_document() {
    let dir = std::env::temp_dir().join(format!("periodlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("job.json");
    let output = dir.join("report.json");
    std::fs::write(&input, fixture("siegel.json")).unwrap();
    let out = bin(
        &["--prec", "128", "--digits", "10", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()],
        "",
    );
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["precision_bits"], 128);
    assert_eq!(v["report"]["value"]["re"], "8.356488483e-1");
    std::fs::remove_dir_all(dir).unwrap();
}
