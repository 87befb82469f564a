use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spectral-rumin"));
    c.env_remove("SPECTRAL_RUMIN_SEED");
    c
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", "groups", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn cell(page: &Value, p: i64, q: i64) -> &Value {
    page["cells"].as_array().unwrap().iter().find(|c| c["p"] == p && c["q"] == q).unwrap()
}

#[test]
fn group_validate_exit_codes() {
    let out = run(&["group-validate", &fixture("heisenberg.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["n"].as_u64(), v["nu"].as_u64()), (Some(3), Some(4)));

    let out = run(&["group-validate", &fixture("engel.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["nu"], 7);

    let out = run(&["group-validate", &fixture("bad-grading.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violations"][0]["kind"], "GradingViolation");
}

#[test]
fn malformed_input_exits_64() {
    let dir = std::env::temp_dir().join(format!("spectral-rumin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("truncated.json");
    std::fs::write(&bad, "{\"name\": \"h\", \"layers\": [2,").unwrap();
    assert_eq!(run(&["group-validate", bad.to_str().unwrap()]).status.code(), Some(64));
    let unknown = dir.join("unknown-field.json");
    std::fs::write(&unknown, r#"{"name": "h", "layers": [2, 1], "extra": 1}"#).unwrap();
    assert_eq!(run(&["group-validate", unknown.to_str().unwrap()]).status.code(), Some(64));
    assert_eq!(run(&["group-validate", "/no/such/file.json"]).status.code(), Some(64));
    assert_eq!(run(&["ss", "--group", "heisenberg", "--model", "nope"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(64));
}

#[test]
fn heisenberg_ce_pages() {
    let out = run(&["ss", "--group", &fixture("heisenberg.json"), "--model", "ce", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let e1 = &v["pages"][1];
    assert_eq!(e1["stable_from"], 1);
    for ((p, q), d) in [((0, 0), 1), ((1, 0), 2), ((2, -1), 0), ((2, 0), 0), ((3, -1), 2), ((4, -1), 1)] {
        assert_eq!(cell(e1, p, q)["dimE"], d, "({p},{q})");
    }
    assert_eq!(v["consistent"], true);
}

#[test]
fn polynomial_heisenberg_reports_d0_and_d1() {
    let out = run(&["ss", "--group", "heisenberg", "--model", "poly", "--poly-weight", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ranked = |r: usize| v["pages"][r]["cells"].as_array().unwrap().iter().any(|c| c["d_rank"].as_u64() > Some(0));
    assert!(ranked(0) && ranked(1));
    assert_eq!(v["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).sum::<u64>(), 56);
}

#[test]
fn abelian_plane_first_page_is_betti() {
    let out = run(&["ss", "--group", &fixture("abelian2.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pages = v["pages"].as_array().unwrap();
    for page in &pages[1..] {
        assert!(page["cells"].as_array().unwrap().iter().all(|c| c["d_rank"] == 0));
    }
    for (p, d) in [(0, 1), (1, 2), (2, 1)] {
        assert_eq!(cell(&pages[1], p, 0)["dimE"], d);
    }
}

#[test]
fn text_grid_is_rendered() {
    let out = run(&["ss", "--group", "heisenberg"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("E_1"));
    assert!(s.contains("E_inf = gr H: yes"));
}

#[test]
fn too_few_pages_is_an_input_error() {
    assert_eq!(run(&["ss", "--group", "heisenberg", "--max-page", "1"]).status.code(), Some(1));
}

#[test]
fn duality_suite_passes() {
    let out = run(&["verify", "duality", "--seed", "7", "--cases", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["cases"].as_array().unwrap().len(), 20);
}

#[test]
fn morphism_suite_reports_failing_control() {
    let out = run(&["verify", "morphism", "--seed", "3", "--cases", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let nc = &json(&out)["negative_control"];
    assert_eq!(nc["identity_holds"], false);
    assert_eq!(nc["fails_as_required"], true);
    assert!(nc["certificate"]["value"].is_string() || nc["certificate"]["value"].is_number());
    assert_eq!(nc["failure"][0], 2);
}

#[test]
fn pullback_suite_passes_at_default_tolerance() {
    let out = run(&["verify", "pullback", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["shear"].as_array().unwrap().iter().all(|r| r["pass"] == true));
    assert!(v["diagnostic"]["pass"].is_null());
    let text = String::from_utf8(run(&["verify", "pullback"]).stdout).unwrap();
    assert!(text.contains("residual 2"));
}

#[test]
fn tight_tolerance_is_a_verification_failure() {
    assert_eq!(run(&["verify", "pullback", "--tol", "1e-12"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "pullback", "--tol", "0"]).status.code(), Some(1));
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = std::env::temp_dir().join(format!("spectral-rumin-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for args in [
        vec!["verify", "duality", "--seed", "11", "--cases", "8"],
        vec!["verify", "morphism", "--seed", "11", "--cases", "4"],
        vec!["ss", "--group", "engel", "--model", "poly"],
    ] {
        let mut files = Vec::new();
        for i in 0..2 {
            let path = dir.join(format!("report-{i}.json"));
            let mut a = args.clone();
            let p = path.to_str().unwrap().to_string();
            a.extend(["--format", "json", "--out", &p]);
            assert_eq!(run(&a).status.code(), Some(0), "{args:?}");
            files.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(files[0], files[1], "{args:?}");
        assert!(!files[0].is_empty());
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let out = bin()
        .env("SPECTRAL_RUMIN_SEED", "42")
        .args(["verify", "duality", "--cases", "2", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 42);
    let flag = run(&["verify", "duality", "--cases", "2", "--seed", "42", "--format", "json"]);
    assert_eq!(out.stdout, flag.stdout);
}
