use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn tridesign(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tridesign"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn tridesign");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
    )
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

/// Runs with `--json` and checks the report against the published schema.
fn tridesign_json(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, stdout) = tridesign(dir, &full);
    let v: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    let errs: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errs.is_empty(), "schema violations for {args:?}: {errs:?}");
    assert_eq!(v["exit_code"], code);
    (code, v)
}

#[test]
fn verify_frob7_balanced() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, _) = tridesign_json(
        d,
        &[
            "datasets",
            "emit",
            "--name",
            "frob7",
            "--out",
            "frob7.design",
        ],
    );
    assert_eq!(c, 0);
    let (c, v) = tridesign_json(d, &["verify", "--in", "frob7.design", "--balanced"]);
    assert_eq!(c, 0);
    assert_eq!(v["balance"]["lambda"], 42);
    assert_eq!(v["cover"]["lines_covered"], 2667);
}

#[test]
fn search_expand_verify_n13() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, v) = tridesign_json(d, &["search", "frobenius", "--n", "13", "--out", "c.json"]);
    assert_eq!(c, 0);
    assert_eq!(v["representatives"], 35);
    let (c, _) = tridesign_json(d, &["expand", "--cert", "c.json", "--out", "d.design.gz"]);
    assert_eq!(c, 0);
    let (c, v) = tridesign_json(d, &["verify", "--in", "d.design.gz", "--balanced"]);
    assert_eq!(c, 0);
    assert_eq!(v["cover"]["triangle_count"], 3_726_905);
    assert_eq!(v["balance"]["lambda"], 2730);
}

#[test]
fn product_of_odd_dimensions_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    tridesign(
        d,
        &[
            "datasets",
            "emit",
            "--name",
            "design6",
            "--out",
            "d6.design",
        ],
    );
    tridesign(
        d,
        &["datasets", "emit", "--name", "frob7", "--out", "d7.design"],
    );
    let (c, v) = tridesign_json(
        d,
        &[
            "construct",
            "product",
            "--left",
            "d7.design",
            "--right",
            "d7.design",
        ],
    );
    assert_eq!(c, 2);
    assert!(v["error"].as_str().unwrap().contains("odd"));
    let (c, v) = tridesign_json(
        d,
        &[
            "construct",
            "product",
            "--left",
            "d6.design",
            "--right",
            "d7.design",
        ],
    );
    assert_eq!(c, 0);
    assert_eq!(v["triangle_count"], 3_726_905);
    assert_eq!(v["census_matches"], true);
}

#[test]
fn damaged_design_fails_with_bounded_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    tridesign(
        d,
        &[
            "datasets",
            "emit",
            "--name",
            "frob7",
            "--out",
            "frob7.design",
        ],
    );
    let text = std::fs::read_to_string(d.join("frob7.design")).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let last = lines.pop().unwrap();
    lines.truncate(lines.len() - 40);
    lines.push(last);
    lines.push(last);
    let body = lines.join("\n").replace("count 889", "count 850") + "\n";
    std::fs::write(d.join("bad.design"), body).unwrap();
    let (c, v) = tridesign_json(d, &["verify", "--in", "bad.design", "--balanced"]);
    assert_eq!(c, 1);
    assert_eq!(v["ok"], false);
    let unc = v["cover"]["uncovered"].as_array().unwrap();
    assert!(!unc.is_empty() && unc.len() < 120);
    assert!(!v["cover"]["multiply_covered"]
        .as_array()
        .unwrap()
        .is_empty());
    assert_eq!(v["balance"]["balanced"], false);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, _) = tridesign(d, &["bogus"]);
    assert_eq!(c, 2);
    let (c, _) = tridesign_json(d, &["verify", "--in", "missing.design"]);
    assert_eq!(c, 2);
    let (c, v) = tridesign_json(d, &["datasets", "emit", "--name", "frob19", "--out", "x"]);
    assert_eq!(c, 2);
    assert!(v["error"].as_str().unwrap().contains("--allow-long"));
    let (c, _) = tridesign_json(d, &["search", "singer", "--n", "9", "--m", "1"]);
    assert_eq!(c, 2);
    let (c, _) = tridesign_json(d, &["search", "frobenius", "--n", "25"]);
    assert_eq!(c, 2);
    tridesign(
        d,
        &["datasets", "emit", "--name", "gdd12-6", "--out", "g.design"],
    );
    tridesign(
        d,
        &["datasets", "emit", "--name", "frob7", "--out", "d7.design"],
    );
    let (c, v) = tridesign_json(
        d,
        &[
            "construct",
            "fill",
            "--gdd",
            "g.design",
            "--filler",
            "d7.design",
        ],
    );
    assert_eq!(c, 2);
    assert!(v["error"].as_str().unwrap().contains("dimension mismatch"));
}

#[test]
fn node_limit_is_search_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (c, v) = tridesign_json(
        dir.path(),
        &[
            "search",
            "singer",
            "--n",
            "12",
            "--m",
            "6",
            "--node-limit",
            "3",
        ],
    );
    assert_eq!(c, 1);
    assert!(v["error"].as_str().unwrap().contains("limit"));
}

#[test]
fn field_and_gamma_queries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, v) = tridesign_json(
        d,
        &[
            "field", "--n", "7", "--zech", "1", "--log", "0x3", "--exp", "7",
        ],
    );
    assert_eq!(c, 0);
    assert_eq!(v["poly"], "0x83");
    // xi^7 = xi + 1 under x^7 + x + 1, so z(1) = 7 and log(3) = 7.
    assert_eq!(v["zech"][0]["value"], 7);
    assert_eq!(v["log"][0]["value"], 7);
    assert_eq!(v["exp"][0]["value"], 3);
    let (c, v) = tridesign_json(
        d,
        &["gamma", "--n", "7", "--k", "1", "--k", "9", "--k", "10"],
    );
    assert_eq!(c, 0);
    assert_eq!(
        v["sets"][0]["elems"],
        serde_json::json!([1, 6, 7, 120, 121, 126])
    );
    assert_eq!(v["triangle_orbit"], true);
}

#[test]
fn search_writes_loadable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, _) = tridesign_json(
        d,
        &[
            "search",
            "singer",
            "--n",
            "7",
            "--seed",
            "3",
            "--out",
            "c.json",
            "--dump-instance",
            "i.txt",
        ],
    );
    assert_eq!(c, 0);
    let inst = tridesign::xcover::XCoverInstance::load(std::io::BufReader::new(
        std::fs::File::open(d.join("i.txt")).unwrap(),
    ))
    .unwrap();
    assert_eq!(inst.items(), 21);
    let (c, v) = tridesign_json(d, &["expand", "--cert", "c.json", "--out", "d.design"]);
    assert_eq!(c, 0);
    assert_eq!(v["triangle_count"], 889);
}

#[test]
fn datasets_list_and_gdd_fill() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, v) = tridesign_json(d, &["datasets", "list"]);
    assert_eq!(c, 0);
    assert_eq!(v["datasets"].as_array().unwrap().len(), 5);
    tridesign(
        d,
        &[
            "datasets",
            "emit",
            "--name",
            "gdd6-2",
            "--out",
            "g62.design",
        ],
    );
    let (c, v) = tridesign_json(d, &["verify", "--in", "g62.design", "--gdd", "--balanced"]);
    assert_eq!(c, 0);
    assert_eq!(v["balance"]["lambda"], 20);
    let (c, _) = tridesign_json(
        d,
        &[
            "datasets", "emit", "--name", "design6", "--out", "x.json", "--format", "cert",
        ],
    );
    assert_eq!(c, 2);
    let (c, _) = tridesign_json(
        d,
        &[
            "datasets", "emit", "--name", "frob13", "--out", "f13.json", "--format", "cert",
        ],
    );
    assert_eq!(c, 0);
    let cert = std::fs::read_to_string(d.join("f13.json")).unwrap();
    assert!(cert.contains("\"pairs\""));
}

#[test]
fn tower_sampling_report() {
    let dir = tempfile::tempdir().unwrap();
    let (c, v) = tridesign_json(
        dir.path(),
        &[
            "--workers",
            "2",
            "construct",
            "gdd6k",
            "--k",
            "2",
            "--sample",
            "2000",
            "--out",
            "t.design.gz",
        ],
    );
    assert_eq!(c, 0);
    assert_eq!(v["triangle_count"], 917_280);
    assert_eq!(v["sampled_exact"], 2000);
    let (c, _) = tridesign_json(
        dir.path(),
        &["verify", "--in", "t.design.gz", "--gdd", "--balanced"],
    );
    assert_eq!(c, 0);
}
