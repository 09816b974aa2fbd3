use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geiser-forge")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("geiser-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn config_round_trips_through_a_file() {
    let out = forge(&["config", "--seed", "2"]);
    assert!(out.status.success());
    let path = tmp("cfg2.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let a = forge(&["quartic", "--seed", "2"]);
    let b = forge(&["quartic", "--config", path.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["degree"], 4);
}

#[test]
fn pipeline_writes_report_and_figure() {
    let json = tmp("pipeline.json");
    let svg = tmp("pipeline.svg");
    let out = forge(&["pipeline", "--seed", "1", "--json", json.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["suite"], "pipeline");
    assert_eq!(report["seed"], 1);
    assert!(report["elapsed_ms"].is_u64());
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));

    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed svg");
    let dual = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("dual"))
        .expect("dual pane");
    assert_eq!(dual.children().filter(|n| n.has_tag_name("line")).count(), 28);
}

#[test]
fn degenerate_configuration_fails_with_named_triple() {
    let path = tmp("collinear.json");
    std::fs::write(&path, r#"{"points":[[1,0,0],[0,1,0],[1,1,0],[1,1,1],[1,2,3],[2,-1,5],[3,4,-2]]}"#).unwrap();
    let json = tmp("collinear-report.json");
    let out = forge(&["pipeline", "--config", path.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = std::fs::read_to_string(&json).unwrap();
    assert!(report.contains("[0, 1, 2]"), "{report}");
}

#[test]
fn bundle_and_class_queries() {
    let out = forge(&["chern", "--class", "2;-1,-1,-1,-1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["chern"]["c1"], 0);
    assert_eq!(v["chern"]["c2"], 0);

    let out = forge(&["h0", "--seed", "1", "--class", "2", "--twist", "1"]);
    assert_eq!(stdout_json(&out)["h0"], 14);

    let out = forge(&["bundle", "--seed", "1", "--n", "3", "h0", "--twist", "-1"]);
    assert_eq!(stdout_json(&out)["h0"], 1);

    let out = forge(&["bundle", "--seed", "1", "--n", "2", "--k", "4", "split", "--line", "3,-7,2"]);
    assert_eq!(stdout_json(&out)["splitting"], serde_json::json!([0, 0]));
}

#[test]
fn certify_signals_non_bitangents_by_exit_code() {
    let bits = forge(&["bitangents", "--seed", "1"]);
    let set = stdout_json(&bits);
    let eq: Vec<String> = set[0]["line"]["equation"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    let out = forge(&["certify", "--seed", "1", "--line", &eq.join(",")]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["bitangent"], true);
    let out = forge(&["certify", "--seed", "1", "--line", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["bitangent"], false);
}

#[test]
fn bad_arguments_are_rejected() {
    assert_eq!(forge(&["qpon", "--n-range", "1..3"]).status.code(), Some(2));
    assert!(!forge(&["chern", "--class", "x"]).status.success());
    assert!(!forge(&["certify", "--line", "1,2"]).status.success());
}
