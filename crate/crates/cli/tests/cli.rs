use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn durrmeyer(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_durrmeyer"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/summary.schema.json");
    read_json(&path)
}

fn assert_summary_shape(summary: &Value) {
    let schema = schema();
    for key in schema["required"].as_array().unwrap() {
        assert!(
            summary.get(key.as_str().unwrap()).is_some(),
            "missing key {key}"
        );
    }
    for key in schema["properties"]["params"]["required"]
        .as_array()
        .unwrap()
    {
        assert!(
            summary["params"].get(key.as_str().unwrap()).is_some(),
            "missing params.{key}"
        );
    }
    assert!(summary["pass"].is_boolean());
    assert!(summary["per_item"].is_array());
    assert!(summary["max_abs_err"].as_f64().unwrap() >= 0.0);
    let commands = schema["properties"]["command"]["enum"].as_array().unwrap();
    assert!(commands.contains(&summary["command"]));
}

#[test]
fn eval_reproduces_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = durrmeyer(
        &[
            "eval", "--fn", "const:1", "--n", "10", "--n", "40", "--grid", "17",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(dir.path().join("eval.csv")).unwrap();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.unwrap();
        let g: f64 = record[3].parse().unwrap();
        assert!((g - 1.0).abs() <= 1e-10, "{record:?}");
        rows += 1;
    }
    assert_eq!(rows, 34);
    let summary = read_json(&dir.path().join("eval.json"));
    assert_summary_shape(&summary);
    assert_eq!(summary["pass"], true);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let files = ["figure2.csv", "figure2.svg", "figure2.json"];
    let snapshot = || -> Vec<Vec<u8>> {
        let out = durrmeyer(&["figure2", "--grid", "65"], dir.path());
        assert_eq!(out.status.code(), Some(0));
        files
            .iter()
            .map(|f| std::fs::read(dir.path().join(f)).unwrap())
            .collect()
    };
    let first = snapshot();
    let second = snapshot();
    assert_eq!(first, second);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["eval", "--alpha", "2"],
        vec!["eval", "--rho", "0"],
        vec!["eval", "--n", "1"],
        vec!["eval", "--fn", "nonsense"],
        vec!["not-a-command"],
    ] {
        let out = durrmeyer(&args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = Command::new(env!("CARGO_BIN_EXE_durrmeyer"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("moments-check"));
}

#[test]
fn converge_and_figures_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = durrmeyer(
        &[
            "converge", "--fn", "e2", "--n", "10", "--n", "20", "--n", "40",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let summary = read_json(&dir.path().join("converge.json"));
    assert_summary_shape(&summary);
    assert_eq!(summary["per_item"].as_array().unwrap().len(), 3);

    let out = durrmeyer(&["figure1", "--periodic-variant"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    for f in [
        "figure1.csv",
        "figure1.svg",
        "figure1_periodic.csv",
        "figure1_periodic.svg",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let svg = std::fs::read_to_string(dir.path().join("figure1.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert_summary_shape(&read_json(&dir.path().join("figure1.json")));
}

#[test]
fn moments_check_reports_discrepancies_and_endpoint_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = durrmeyer(&["moments-check"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let summary = read_json(&dir.path().join("moments.json"));
    assert_summary_shape(&summary);
    assert_eq!(summary["endpoint_gap_found"], true);
    assert_eq!(summary["discrepancies"].as_array().unwrap().len(), 3);
    for f in [
        "moments_published.csv",
        "moments_rederived.csv",
        "central_moments.csv",
        "central_closed_vs_expansion.csv",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn bounds_check_flags_the_voronovskaja_cells_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = durrmeyer(&["bounds-check"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let summary = read_json(&dir.path().join("bounds.json"));
    assert_summary_shape(&summary);
    assert_eq!(summary["pass"], false);
    assert_eq!(summary["inequalities_pass"], true);
    assert_eq!(summary["global_pass"], true);
    assert_eq!(summary["tails_pass"], true);
    assert_eq!(summary["voronovskaja_pass"], false);
}
