use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn trigal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_s2_summary() {
    let o = trigal(&["analyze", &fixture("s2.tbl"), "--lmax", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("reducible candidates: 5 13 1901 105649"), "{s}");
    assert!(s.contains("excluded classes: 1 mod 64, 31 mod 32"));
    assert!(s.contains("large reducible candidates"));
}

#[test]
fn analyze_level88_lists_large_candidates() {
    let o = trigal(&["analyze", &fixture("level88.tbl"), "--lmax", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("reducible candidates: 2879 48889"));
    assert!(s.contains("exceptional candidates: 5 7 11 13 19"));
    let section = s.split("large reducible candidates").nth(1).expect("section present");
    assert!(section.contains("2879") && section.contains("48889"));
    assert!(!s.contains("l = 2879"));
}

#[test]
fn empty_table_exits_2() {
    let o = trigal(&["analyze", &fixture("level53.tbl")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Condition 1' unverifiable"));
}

#[test]
fn parse_and_usage_errors() {
    let dir = std::env::temp_dir().join(format!("trigal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tbl");
    std::fs::write(&bad, "field-D 1\nbad 2\nmode geometric 128\nap 3 x 2\n").unwrap();
    let o = trigal(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert_eq!(trigal(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(trigal(&["analyze"]).status.code(), Some(64));
    assert_eq!(trigal(&["sieve", "reducible", &fixture("s2.tbl"), "--probe", "127"]).status.code(), Some(64));
    assert_eq!(trigal(&["--help"]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_round_trip_and_determinism() {
    let args = ["analyze", &fixture("s2.tbl"), "--lmax", "80", "--format", "json"];
    let a = stdout(&trigal(&args));
    let b = stdout(&trigal(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), a);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 22);
    for key in ["ell", "splitting", "status", "witnesses"] {
        assert!(verdicts[0].get(key).is_some(), "{key}");
    }
    let v13 = verdicts.iter().find(|v| v["ell"] == 13).unwrap();
    assert_eq!(v13["status"], "certified:PSL3");
}

#[test]
fn sieve_reducible_with_probes() {
    let o = trigal(&[
        "sieve", "reducible", &fixture("s2.tbl"), "--probe", "127:+1", "--probe", "3:+-1", "--group", "1", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap().ends_with("candidates 5 13 1901 105649"));
}

#[test]
fn sieve_cubic_and_duality() {
    let s = stdout(&trigal(&["sieve", "cubic", &fixture("s2.tbl")]));
    assert!(s.contains("case d cannot occur"));
    let s = stdout(&trigal(&["sieve", "duality", &fixture("s2.tbl")]));
    assert_eq!(s.matches("order-2 character mod 8").count(), 3);
}

#[test]
fn lemma83_and_points() {
    let s = stdout(&trigal(&["lemma83", "7", "--exhaustive"]));
    let first = s.lines().next().unwrap();
    assert!(first.starts_with("0 violations / ") && first.ends_with(" irreducible instances"), "{first}");
    assert_eq!(stdout(&trigal(&["count-points", "--a", "2", "--p", "3"])), "9\n");
    let csv = stdout(&trigal(&["count-points", "--a", "2", "--pmax", "7"]));
    assert_eq!(csv.lines().collect::<Vec<_>>(), ["a,p,affine_count,character_sum", "2,3,9,0", "2,5,21,-4", "2,7,53,4"]);
}

#[test]
fn certify_single_prime() {
    let s = stdout(&trigal(&["certify", &fixture("s2.tbl"), "5"]));
    assert!(s.contains("candidate:reducible"));
    let s = stdout(&trigal(&["certify", &fixture("s2.tbl"), "2"]));
    assert!(s.contains("excluded_by_hypothesis"));
}

#[test]
fn orders_draft_parses() {
    let s = stdout(&trigal(&["orders"]));
    let set = trigal_core::catalog::PresetSet::parse(&s).unwrap();
    assert!(set.get("derived").is_some());
}

#[test]
fn congruence_identity() {
    let dir = std::env::temp_dir().join(format!("trigal-cong-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let b = dir.join("b.txt");
    // b_p = a_p - 1 for the s2 entries
    std::fs::write(&b, "bp 3 0 2\nbp 5 -2 -4\nbp 127 160 -16\n").unwrap();
    let s = stdout(&trigal(&["congruence", &fixture("s2.tbl"), b.to_str().unwrap(), "--ell", "5", "--offset", "1"]));
    assert!(s.starts_with("2 primes checked, 0 violations"), "{s}");
    std::fs::remove_dir_all(&dir).ok();
}
