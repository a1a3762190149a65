//! The command line, driven in-process.

use higher_groupoids::cli::run;
use serde_json::Value;

fn hgpd(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hgpd").chain(args.iter().copied()).map(String::from);
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> String {
    let (code, doc, err) = hgpd(&["fixture", name], "");
    assert_eq!(code, 0, "{err}");
    doc
}

/// Replaces the value of the first entry of the object at `pointer` with another of its values.
fn corrupt(doc: &str, pointer: &str) -> String {
    let mut v: Value = serde_json::from_str(doc).unwrap();
    let table = v.pointer_mut(pointer).unwrap().as_object_mut().unwrap();
    let first = table.values().next().unwrap().clone();
    let other = table.values().find(|x| **x != first).unwrap().clone();
    *table.values_mut().next().unwrap() = other;
    serde_json::to_string(&v).unwrap()
}

#[test]
fn crossed_module_fixture_checks() {
    let (code, out, _) = hgpd(&["check", "--as", "two-groupoid", "-"], &fixture("xmod:Z2Z2"));
    assert_eq!(code, 0);
    assert!(out.contains("PASS  pentagon [two-groupoid.pentagon]"));
    assert!(out.ends_with("verdict: PASS\n"));
}

#[test]
fn cyclic_group_nerve_is_a_one_groupoid() {
    let (code, nerve, _) = hgpd(&["nerve", "-N", "4"], &fixture("group:cyclic:3"));
    assert_eq!(code, 0);
    let (code, out, _) = hgpd(&["check", "--n-groupoid", "1", "--up-to", "4"], &nerve);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Kan!(4,2)"));
}

#[test]
fn corrupted_documents_fail_with_a_named_law() {
    let bad = corrupt(&fixture("xmod:Z2Z2"), "/m/0");
    let (code, out, _) = hgpd(&["check", "-"], &bad);
    assert_eq!(code, 1);
    let fail = out.lines().find(|l| l.contains("FAIL")).unwrap();
    assert!(fail.contains("[two-groupoid."), "{fail}");
    assert!(fail.contains("witness:"), "{fail}");

    let bad = corrupt(&fixture("pair:2"), "/compose");
    let (code, out, _) = hgpd(&["check", "-"], &bad);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.starts_with("  FAIL") && l.contains("[groupoid.")), "{out}");
}

#[test]
fn schema_errors_exit_two() {
    let (code, _, err) = hgpd(&["check", "-"], "{\"format_version\": \"1\", \"kind\": \"groupoid\"}");
    assert_eq!(code, 2);
    assert!(err.contains("$"), "{err}");
    let (code, _, _) = hgpd(&["check", "-"], "not json");
    assert_eq!(code, 2);
    let (code, _, _) = hgpd(&["fixture", "nonsense"], "");
    assert_eq!(code, 2);
    let (code, _, _) = hgpd(&["check", "--as", "stacky", "-"], &fixture("pair:2"));
    assert_eq!(code, 2);
    let (code, _, _) = hgpd(&["no-such-command"], "");
    assert_eq!(code, 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for name in ["point", "pair:3", "xmod:Z2Z2", "cech", "ordinary-groupoid"] {
        assert_eq!(fixture(name), fixture(name));
    }
    let doc = fixture("xmod:Z2Z2");
    assert_eq!(hgpd(&["to-stacky"], &doc), hgpd(&["to-stacky"], &doc));
    assert_eq!(hgpd(&["--json", "check"], &doc), hgpd(&["--json", "check"], &doc));
}

#[test]
fn json_reports_mirror_the_report() {
    let (code, out, _) = hgpd(&["check", "--json", "-"], &fixture("pair:2"));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "PASS" && c.get("witness").is_none()));
}

#[test]
fn conversions_chain() {
    let (code, stacky, _) = hgpd(&["to-stacky"], &fixture("xmod:Z2Z2"));
    assert_eq!(code, 0);
    assert_eq!(hgpd(&["check"], &stacky).0, 0);
    let (code, back, _) = hgpd(&["from-stacky"], &stacky);
    assert_eq!(code, 0);
    assert_eq!(hgpd(&["check", "--as", "two-groupoid"], &back).0, 0);
    let (code, inverse, _) = hgpd(&["inverse-bibundle"], &stacky);
    assert_eq!(code, 0);
    assert_eq!(hgpd(&["check", "--as", "bibundle"], &inverse).0, 0);
    let (code, truncated, _) = hgpd(&["truncate"], &hgpd(&["nerve", "-N", "4"], &fixture("point")).1);
    assert_eq!(code, 0);
    assert_eq!(truncated, fixture("point"));
}

#[test]
fn files_and_two_input_commands() {
    let dir = std::env::temp_dir().join(format!("hgpd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    assert_eq!(hgpd(&["fixture", "ordinary-groupoid", "-o", &path("o.json")], "").0, 0);
    assert_eq!(hgpd(&["inverse-bibundle", &path("o.json"), "-o", &path("i.json")], "").0, 0);
    let (code, composite, err) = hgpd(&["compose-bibundle", &path("i.json"), &path("i.json")], "");
    assert_eq!(code, 0, "{err}");
    assert_eq!(hgpd(&["check"], &composite).0, 0);

    assert_eq!(hgpd(&["fixture", "xmod:Z2Z2", "-o", &path("x.json")], "").0, 0);
    assert_eq!(hgpd(&["fixture", "point", "-o", &path("p.json")], "").0, 0);
    let (code, out, _) = hgpd(&["morita-search", &path("x.json"), &path("x.json"), "--bound", "2"], "");
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = hgpd(&["morita-search", &path("x.json"), &path("p.json"), "--bound", "2"], "");
    assert_eq!(code, 1);
    assert!(out.contains("[morita.invariants]"));

    assert_eq!(hgpd(&["fixture", "cech", "-o", &path("c.json")], "").0, 0);
    assert_eq!(hgpd(&["equiv", &path("c.json")], "").0, 0);
    let (code, out, _) = hgpd(&["equiv", "--one", &path("c.json")], "");
    assert_eq!(code, 1);
    assert!(out.contains("[equivalence.one]"));
    std::fs::remove_dir_all(&dir).unwrap();
}
