use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_confext")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn algebra_passes() {
    let o = run([Path::new("verify-algebra"), &data("cur1.alg")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("associativity: PASS"));
}

#[test]
fn rejected_flag_names_f9() {
    let o = run([Path::new("verify-flag"), &data("hh3_rejected.flag")]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("f9 "), "{text}");
    assert!(!text.contains("f1 "), "{text}");
}

#[test]
fn json_report_lists_failures() {
    let o = run([Path::new("--format"), Path::new("json"), Path::new("verify-flag"), &data("hh3_rejected.flag")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "FAIL");
    let ids: Vec<&str> = v["items"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["axiom_id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["f9", "f11", "f13", "f14"]);
}

#[test]
fn module_checks() {
    let left = run([Path::new("verify-module"), &data("cur1.alg"), &data("left_scalar.act")]);
    assert_eq!(code(&left), 1);
    assert!(stdout(&left).contains("LM2"));
    let right = run([Path::new("verify-module"), &data("cur1.alg"), &data("right_unit.act")]);
    assert_eq!(code(&right), 0);
}

#[test]
fn datum_and_cce() {
    assert_eq!(code(&run([Path::new("verify-datum"), &data("hh2_q.datum")])), 0);
    assert_eq!(code(&run([Path::new("verify-cce"), &data("symmetric.cce")])), 0);
    let special = run([Path::new("verify-special"), Path::new("--kind"), Path::new("nonsense"), &data("hh2_q.datum")]);
    assert_eq!(code(&special), 2);
}

#[test]
fn explicit_witness() {
    let (d, dp, w) = (data("hh2_q_scaled.datum"), data("hh2_q.datum"), data("beta2.witness"));
    let o = run([Path::new("equiv"), &d, &dp, Path::new("--witness"), &w]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run([Path::new("equiv"), &dp, &d, Path::new("--witness"), &w]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("g6"));
}

#[test]
fn witness_search() {
    let o = run([Path::new("equiv"), &data("hh2_q.datum"), &data("hh2_q_scaled.datum"), Path::new("--search")]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("equivalence search: FOUND"), "{text}");
    let fixtures = tempfile::tempdir().unwrap();
    assert_eq!(code(&run([Path::new("fixtures"), Path::new("--which"), Path::new("hh3"), Path::new("-o"), fixtures.path()])), 0);
    let flags = [fixtures.path().join("hh3_1.flag"), fixtures.path().join("hh3_2.flag")];
    let datums: Vec<PathBuf> = flags
        .iter()
        .map(|f| {
            let out = f.with_extension("datum");
            assert_eq!(code(&run([Path::new("flag-convert"), f, Path::new("-o"), &out])), 0);
            out
        })
        .collect();
    let o = run([Path::new("equiv"), &datums[0], &datums[1], Path::new("--search"), Path::new("--deg"), Path::new("1")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("INEQUIVALENT") || stdout(&o).contains("NOT_FOUND"));
}

#[test]
fn flag_round_trip_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (d1, f2, d3) = (dir.path().join("a.datum"), dir.path().join("b.flag"), dir.path().join("c.datum"));
    assert_eq!(code(&run([Path::new("flag-convert"), &data("hh3_rejected.flag"), Path::new("-o"), &d1])), 0);
    assert_eq!(code(&run([Path::new("flag-convert"), &d1, Path::new("-o"), &f2])), 0);
    assert_eq!(code(&run([Path::new("flag-convert"), &f2, Path::new("-o"), &d3])), 0);
    assert_eq!(fs::read(&d1).unwrap(), fs::read(&d3).unwrap());
    assert_eq!(code(&run([Path::new("verify-datum"), &d1])), 1);
}

#[test]
fn unified_product_and_extract() {
    let dir = tempfile::tempdir().unwrap();
    let (alg, datum, alg2) = (dir.path().join("e.alg"), dir.path().join("d.datum"), dir.path().join("e2.alg"));
    assert_eq!(code(&run([Path::new("build-unified"), &data("hh2_q.datum"), Path::new("-o"), &alg])), 0);
    assert_eq!(code(&run([Path::new("verify-algebra"), &alg])), 0);
    assert_eq!(code(&run([Path::new("extract"), &alg, Path::new("--split"), Path::new("1"), Path::new("-o"), &datum])), 0);
    assert_eq!(code(&run([Path::new("build-unified"), &datum, Path::new("-o"), &alg2])), 0);
    assert_eq!(fs::read(&alg).unwrap(), fs::read(&alg2).unwrap());
    let printed = run([Path::new("extract"), &alg, Path::new("--split"), Path::new("1")]);
    assert_eq!(stdout(&printed).into_bytes(), fs::read(&datum).unwrap());
}

#[test]
fn fixtures_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run([Path::new("fixtures"), Path::new("--which"), Path::new("hh2"), Path::new("-o"), dir.path()])), 0);
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"hh2_1_qLpD.flag".to_string()), "{names:?}");
    assert_eq!(names.len(), 9);
    for n in names {
        assert_eq!(code(&run([Path::new("verify-flag"), &dir.path().join(n)])), 0);
    }
}

#[test]
fn classify_hh2() {
    let o = run(["--format", "json", "classify", "--fixture", "hh2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["unmatched"], 0);
    assert_eq!(v["families"].as_array().unwrap().len(), 5);
}

#[test]
fn classify_cap() {
    let o = run(["classify", "--fixture", "hh3", "--deg", "3", "--coeffs", "-1,0,1", "--cap", "1000"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(["verify-algebra", "/nonexistent/file.alg"])), 2);
    assert_eq!(code(&run(["no-such-command"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    fs::write(&bad, r#"{"rank": 1, "products": [{"i": 0, "j": 0, "terms": [{"k": 3, "poly": "1"}]}]}"#).unwrap();
    let o = run([Path::new("verify-algebra"), &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("products[0]"));
}
