use std::path::PathBuf;
use std::process::Command;

use edge_shapley::cli::run;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn edgeshap(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("edgeshap").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("edgeshap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn json_report_carries_exact_and_decimal_values() {
    let o = edgeshap(&["compute", "--fixture", "counterexample-H", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["scenario"], "counterexample-H");
    assert_eq!(report["method"], "edge_shapley");
    let allocations = report["allocations"].as_array().unwrap();
    let exact: Vec<&str> = allocations.iter().map(|a| a["exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["5/3", "5/3", "3/2", "8/3", "3/2"]);
    assert_eq!(allocations[0]["node"], "A");
    assert!((allocations[0]["decimal"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-15);
    assert_eq!(report["total"]["exact"], "9");
    assert!(report["elapsed_ms"].is_null());
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["name"] == "efficiency" && c["status"] == "pass"));
}

#[test]
fn approx_reports_omit_exact_strings() {
    let o = edgeshap(&["compute", "--fixture", "chain-suppliers", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["domain"], "approx");
    assert!(report["allocations"][0].get("exact").is_none());
}

#[test]
fn csv_rows_match_json_entries() {
    for fixture in ["counterexample-H", "chain-modules", "two-node"] {
        let json = edgeshap(&["compute", "--fixture", fixture, "--format", "json"]);
        let csv = edgeshap(&["compute", "--fixture", fixture, "--format", "csv"]);
        let report: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        let mut lines = csv.stdout.lines();
        assert_eq!(lines.next(), Some("node,value"));
        let rows: Vec<(String, String)> = lines
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.to_string(), b.to_string())
            })
            .collect();
        let entries = report["allocations"].as_array().unwrap();
        assert_eq!(rows.len(), entries.len());
        for ((node, value), entry) in rows.iter().zip(entries) {
            assert_eq!(node, entry["node"].as_str().unwrap());
            match entry.get("exact") {
                Some(exact) => assert_eq!(value, exact.as_str().unwrap()),
                None => assert_eq!(value.parse::<f64>().unwrap(), entry["decimal"].as_f64().unwrap()),
            }
        }
    }
}

#[test]
fn output_is_byte_deterministic_across_runs_and_threads() {
    for method in ["edge_shapley", "sampled", "myerson"] {
        let args = |threads: &'static str| {
            vec!["compute", "--fixture", "chain-modules", "--method", method, "--samples", "5000", "--seed", "9", "--format", "json", "--threads", threads]
        };
        let a = edgeshap(&args("1"));
        let b = edgeshap(&args("1"));
        let c = edgeshap(&args("3"));
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout, "{method}");
    }
}

#[test]
fn expected_mismatch_exits_two() {
    let text = edge_shapley::scenario::fixtures::source("counterexample-H")
        .unwrap()
        .replace(r#""D": "8/3""#, r#""D": "3""#);
    let path = scratch("wrong-expected.json");
    std::fs::write(&path, text).unwrap();
    let path = path.to_str().unwrap();
    let o = edgeshap(&["compute", "--input", path, "--check-expected"]);
    assert_eq!(o.code, 2);
    assert!(o.stdout.contains("[FAIL] expected"));
    assert_eq!(edgeshap(&["compute", "--input", path]).code, 0);
    assert_eq!(edgeshap(&["compute", "--fixture", "chain-costly-edge", "--check-expected"]).code, 0);
}

#[test]
fn exit_codes_follow_the_convention() {
    assert_eq!(edgeshap(&["compute", "--input", "/no/such/file.json"]).code, 65);
    assert_eq!(edgeshap(&["compute", "--fixture", "no-such-fixture"]).code, 65);
    assert_eq!(edgeshap(&["whatif", "--fixture", "counterexample-H", "--remove-node", "Z"]).code, 65);
    assert_eq!(edgeshap(&["whatif", "--fixture", "counterexample-H", "--remove-edge", "A", "B"]).code, 65);
    assert_eq!(edgeshap(&["compute", "--fixture", "counterexample-H", "--method", "closed_form"]).code, 64);
    assert_eq!(edgeshap(&["compute", "--fixture", "counterexample-H", "--method", "nonsense"]).code, 64);
    assert_eq!(edgeshap(&["compute", "--fixture", "smartphone", "--max-players", "12"]).code, 64);
    assert_eq!(edgeshap(&["compute"]).code, 64);
    assert_eq!(edgeshap(&["compute", "--fixture", "two-node", "--bogus"]).code, 64);
    assert_eq!(edgeshap(&["--help"]).code, 0);

    let path = scratch("broken.json");
    std::fs::write(&path, "{\n  \"nodes\": [\"A\",\n}").unwrap();
    let o = edgeshap(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(o.code, 65);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
}

#[test]
fn whatif_reports_equal_endpoint_deltas() {
    let o = edgeshap(&["whatif", "--fixture", "counterexample-H", "--remove-edge", "A", "D", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["deltas"][0]["exact"], "-5/3");
    assert_eq!(report["deltas"][3]["exact"], "-5/3");
    assert_eq!(report["checks"][0]["status"], "pass");

    let o = edgeshap(&["whatif", "--fixture", "chain-suppliers", "--remove-node", "E"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("removed:  node E"));
}

#[test]
fn axioms_report_component_mismatch_as_information() {
    let o = edgeshap(&["axioms", "--fixture", "counterexample-H"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("{C,E}: sum 3 vs worth 1"), "{}", o.stdout);
    assert!(o.stdout.contains("[pass] fairness"));
    assert!(o.stdout.contains("[info] component-efficiency"));

    let o = edgeshap(&["axioms", "--fixture", "platform-dual", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["components"].as_array().unwrap().len(), 1);
}

#[test]
fn report_can_be_written_to_a_file() {
    let path = scratch("report.json");
    let o = edgeshap(&["compute", "--fixture", "two-node", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["allocations"][1]["exact"], "7/2");
}

#[test]
fn fixtures_subcommand_lists_and_prints() {
    let o = edgeshap(&["fixtures"]);
    assert!(o.stdout.lines().any(|l| l == "smartphone"));
    let o = edgeshap(&["fixtures", "--show", "two-node"]);
    assert!(edge_shapley::scenario::Scenario::from_json(&o.stdout).is_ok());
}

#[test]
fn binary_exits_with_the_run_status() {
    let bin = env!("CARGO_BIN_EXE_edgeshap");
    let ok = Command::new(bin).args(["compute", "--fixture", "two-node", "--format", "csv"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "node,value\nX,7/2\nY,7/2\n");
    let bad = Command::new(bin).args(["compute", "--input", "/no/such/file.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(65));
}
