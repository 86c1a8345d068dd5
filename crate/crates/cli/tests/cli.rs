//! End-to-end runs of the binary: report shapes, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn grpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpd"))
        .args(args)
        .env_remove("GRPD_SEED")
        .output()
        .expect("spawn grpd")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn cohomology_of_bz2_matches_the_bar_values() {
    let out = grpd(&[
        "cohomology",
        "--in",
        &fixture("z2.json"),
        "--cutoff",
        "5",
        "--coeff",
        "z",
    ]);
    let v = json_of(&out);
    let groups = v["result"]["groups"].as_array().unwrap();
    let expect = [
        (1u64, vec![]),
        (0, vec![]),
        (0, vec!["2"]),
        (0, vec![]),
        (0, vec!["2"]),
    ];
    assert_eq!(groups.len(), 5);
    for (g, (fr, tors)) in groups.iter().zip(expect.iter()) {
        assert_eq!(g["free_rank"].as_u64().unwrap(), *fr);
        let t: Vec<String> = g["torsion"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_str().unwrap().to_string())
            .collect();
        assert_eq!(t, *tors);
        assert_eq!(g["guaranteed"].as_bool(), Some(true));
    }
}

#[test]
fn diffchar_of_the_circle_cover() {
    let out = grpd(&[
        "diffchar",
        "--in",
        &fixture("circle-cover.json"),
        "--k",
        "2",
        "--lambda",
        "z",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["value"]["qz_rank"].as_u64(), Some(1));
    assert_eq!(
        v["result"]["value"]["extension_resolved"].as_bool(),
        Some(false)
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec![
            "cohomology",
            "--in",
            &fixture("z2.json") as &str,
            "--cutoff",
            "4",
        ],
        vec![
            "mh",
            "--in",
            &fixture("circle-cover.json"),
            "--r",
            "1",
            "--n",
            "0",
        ],
        vec!["check-all", "--trials", "4", "--seed", "7"],
        vec![
            "theta",
            "--in",
            &fixture("circle-cover.json"),
            "--k",
            "2",
            "--q",
            "1",
            "--seed",
            "3",
        ],
    ] {
        let a = grpd(&args);
        let b = grpd(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn malformed_json_exits_2_with_position() {
    let out = grpd(&["validate", "--in", &fixture("broken.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") || err.contains("column"), "{err}");
}

#[test]
fn cutoff_insufficient_exits_4() {
    let out = grpd(&[
        "cohomology",
        "--in",
        &fixture("z2.json"),
        "--cutoff",
        "3",
        "--degree-window",
        "0..4",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn validate_reports_violations_without_aborting() {
    // corrupt the inverse table of Z/2 in a temp file
    let text = std::fs::read_to_string(fixture("z2.json")).unwrap();
    let bad = text.replace("\"g1\": \"g1\"", "\"g1\": \"g0\"");
    let dir = std::env::temp_dir().join("grpd-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad-z2.json");
    std::fs::write(&path, bad).unwrap();
    let out = grpd(&["validate", "--in", &path.to_string_lossy()]);
    let v = json_of(&out);
    assert_eq!(v["result"]["valid"].as_bool(), Some(false));
    let violations = v["result"]["violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .any(|x| x.as_str().unwrap().contains("g1")));
}

#[test]
fn classify_reports_the_holonomy() {
    let out = grpd(&[
        "classify",
        "--in",
        &fixture("circle-cover.json"),
        "--bundle",
        &fixture("flat-third.json"),
        "--k",
        "1",
    ]);
    let v = json_of(&out);
    let hol: Vec<String> = v["result"]["diffchar_holonomy"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert!(
        hol.contains(&"1/3".to_string()) || hol.contains(&"2/3".to_string()),
        "{hol:?}"
    );
    // conventions are part of the report
    assert!(v["conventions"]["stokes"]
        .as_str()
        .unwrap()
        .contains("Theta"));
    assert_eq!(v["cutoff_guarantee"]["cutoff"].as_u64(), Some(4));
}

#[test]
fn iso_accepts_identity_gauge_on_equal_bundles() {
    let out = grpd(&[
        "iso",
        "--in",
        &fixture("circle-cover.json"),
        "--lhs",
        &fixture("flat-third.json"),
        "--rhs",
        &fixture("flat-third.json"),
        "--gauge",
        &fixture("identity-gauge.json"),
        "--k",
        "1",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["isomorphic"].as_bool(), Some(true));
}

#[test]
fn stokes_command_runs_exact_trials() {
    let out = grpd(&[
        "stokes",
        "--in",
        &fixture("circle-cover.json"),
        "--k",
        "2",
        "--q",
        "2",
        "--trials",
        "5",
        "--seed",
        "11",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["passed"].as_u64(), Some(5));
}

#[test]
fn seed_env_overrides_flag() {
    let base = grpd(&[
        "theta",
        "--in",
        &fixture("circle-cover.json"),
        "--k",
        "1",
        "--q",
        "1",
        "--seed",
        "1",
    ]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_grpd"))
        .args([
            "theta",
            "--in",
            &fixture("circle-cover.json"),
            "--k",
            "1",
            "--q",
            "1",
            "--seed",
            "2",
        ])
        .env("GRPD_SEED", "1")
        .output()
        .unwrap();
    assert_eq!(base.stdout, with_env.stdout);
}

#[test]
fn les_and_xi_reports() {
    let out = grpd(&[
        "les",
        "--in",
        &fixture("circle-cover.json"),
        "--r",
        "1",
        "--n",
        "0",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["all_exact"].as_bool(), Some(true));
    let out = grpd(&[
        "xi",
        "--in",
        &fixture("circle-cover.json"),
        "--r",
        "1",
        "--n",
        "1",
    ]);
    let v = json_of(&out);
    assert_eq!(v["result"]["surjective"].as_bool(), Some(true));
}

#[test]
fn corrupt_bundle_exits_3() {
    let out = grpd(&[
        "classify",
        "--in",
        &fixture("circle-cover.json"),
        "--bundle",
        &fixture("corrupt-bundle.json"),
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("Dh != ω - c") || err.contains("invalid bundle"),
        "{err}"
    );
}

#[test]
fn check_all_passes() {
    let out = grpd(&["check-all", "--trials", "6", "--seed", "5"]);
    let v = json_of(&out);
    assert_eq!(v["result"]["all_ok"].as_bool(), Some(true));
}
