mod common;

use std::fs;
use std::path::Path;

use common::{cli, desk_copy, desk_dir, edit_line};
use h2chain::dataset::{load_scenario, scenario_hash};
use h2chain::report::csv_hash;

/// Desk copy reduced to country XA, so full runs stay quick.
fn small_copy() -> tempfile::TempDir {
    let t = desk_copy();
    let pot = t.path().join("potentials.csv");
    let text: String = fs::read_to_string(&pot)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("XB,"))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&pot, text).unwrap();
    for e in fs::read_dir(t.path().join("profiles")).unwrap() {
        let p = e.unwrap().path();
        if p.file_name().unwrap().to_string_lossy().starts_with("XB_") {
            fs::remove_file(p).unwrap();
        }
    }
    t
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn files_except_manifest(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().unwrap().is_file() && e.file_name() != "manifest.json")
        .map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn validate_accepts_the_bundled_set() {
    let o = cli(&["validate", s(&desk_dir())]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("0 errors, 0 warnings"));
}

#[test]
fn validate_reports_a_broken_cell_with_its_location() {
    let t = desk_copy();
    edit_line(&t.path().join("storage.csv"), 4, |l| l.replacen("414", "4x4", 1));
    let o = cli(&["validate", s(t.path())]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("storage.csv") && o.stdout.contains("line 4"), "{}", o.stdout);
}

#[test]
fn validate_reports_invariant_violations() {
    let t = desk_copy();
    edit_line(&t.path().join("profiles").join("XB_wind_onshore_2_1.csv"), 10, |l| {
        let mut f: Vec<String> = l.split(',').map(str::to_string).collect();
        f[2] = "1".into();
        f.join(",")
    });
    let o = cli(&["validate", s(t.path())]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("XB_wind_onshore_2_1") && o.stdout.contains("1 errors"), "{}", o.stdout);
}

#[test]
fn validate_without_profiles_is_an_io_failure() {
    let t = desk_copy();
    fs::remove_dir_all(t.path().join("profiles")).unwrap();
    assert_eq!(cli(&["validate", s(t.path())]).code, 2);
    assert_eq!(cli(&["validate", "/nonexistent/scenario"]).code, 2);
}

#[test]
fn btc_needs_exactly_one_price_source() {
    let o = cli(&["btc", s(&desk_dir()), "--year", "2030", "--out", "/tmp/unused"]);
    assert_ne!(o.code, 0);
    let o = cli(&["btc", s(&desk_dir()), "--year", "2030", "--out", "/tmp/unused", "--prices", "x", "--inline-wtb"]);
    assert_ne!(o.code, 0);
}

#[test]
fn runs_are_reproducible_and_tagged() {
    let t = small_copy();
    let dir = s(t.path());
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let w1 = cli(&["--jobs", "1", "wtb", dir, "--year", "2030", "--demand-twh", "10", "--out", s(a.path())]);
    assert_eq!(w1.code, 0, "{}", w1.stderr);
    let w2 = cli(&["--jobs", "3", "wtb", dir, "--year", "2030", "--demand-twh", "10", "--out", s(b.path())]);
    assert_eq!(w2.code, 0, "{}", w2.stderr);
    assert_eq!(w1.stdout, w2.stdout);
    assert_eq!(files_except_manifest(a.path()), files_except_manifest(b.path()));

    let hash = scenario_hash(&load_scenario(t.path()).unwrap());
    let curve = fs::read_to_string(a.path().join("supply_curve_ammonia_2030.csv")).unwrap();
    assert_eq!(csv_hash(&curve), Some(hash.as_str()));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario_hash"], hash.as_str());
    assert_eq!(manifest["command"], "wtb");

    let prices = a.path().join("prices.json");
    for sub in ["btc", "sweep"] {
        let x = a.path().join(format!("{sub}1"));
        let y = a.path().join(format!("{sub}2"));
        let mut args = vec![sub, dir, "--year", "2030", "--prices", s(&prices)];
        if sub == "sweep" {
            args.extend(["--product", "hydrogen"]);
        }
        let mut one = vec!["--jobs", "1"];
        one.extend(&args);
        one.extend(["--out", s(&x)]);
        let mut two = vec!["--jobs", "2"];
        two.extend(&args);
        two.extend(["--out", s(&y)]);
        let o = cli(&one);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(cli(&two).code, 0);
        assert_eq!(files_except_manifest(&x), files_except_manifest(&y));
    }
    let costs = fs::read_to_string(a.path().join("btc1").join("consumer_costs.csv")).unwrap();
    assert_eq!(costs.lines().count(), 2 + 14);
}

#[test]
fn prices_from_another_scenario_are_rejected() {
    let t = small_copy();
    let a = tempfile::tempdir().unwrap();
    let o = cli(&["wtb", s(t.path()), "--year", "2030", "--commodity", "GH2", "--demand-twh", "1", "--out", s(a.path())]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    edit_line(&t.path().join("countries.csv"), 2, |l| l.replacen("0.06", "0.07", 1));
    let prices = a.path().join("prices.json");
    let o = cli(&["btc", s(t.path()), "--year", "2030", "--prices", s(&prices), "--out", s(&a.path().join("btc"))]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("scenario"), "{}", o.stderr);
    assert!(!a.path().join("btc").join("consumer_costs.csv").exists());
}

#[test]
fn lp_dump_writes_one_file_per_site() {
    let t = small_copy();
    let a = tempfile::tempdir().unwrap();
    let o = cli(&[
        "wtb", s(t.path()), "--year", "2040", "--commodity", "GH2", "--demand-twh", "1", "--dump-lp", "--out", s(a.path()),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lps: Vec<_> = fs::read_dir(a.path().join("lp")).unwrap().collect();
    assert_eq!(lps.len(), 4);
    let one = fs::read_to_string(a.path().join("lp").join("gaseous_hydrogen_2040_XA_pv_1_0.lp")).unwrap();
    assert!(one.contains("Minimize") || one.contains("minimize"), "{}", &one[..one.len().min(200)]);
}
