use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn popmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popmatch"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = popmatch(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_dominant_fig3() {
    let fig3 = data("fig3.pref");
    let (code, v) = json(&[
        "solve",
        "--property",
        "dominant",
        "-i",
        fig3.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 2);
    assert_eq!(
        v["matching"],
        serde_json::json!([["a1", "b2"], ["a2", "b1"]])
    );
}

#[test]
fn solve_algorithms_agree_on_size() {
    let fig4 = data("fig4.pref");
    let f = fig4.to_str().unwrap();
    let (_, a) = json(&[
        "solve",
        "--property",
        "dominant",
        "--algo",
        "level-graph",
        "-i",
        f,
    ]);
    let (_, b) = json(&[
        "solve",
        "--property",
        "dominant",
        "--algo",
        "two-level",
        "-i",
        f,
    ]);
    assert_eq!(a["size"], b["size"]);
    let out = popmatch(&[
        "solve",
        "--property",
        "stable",
        "--algo",
        "two-level",
        "-i",
        f,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes_and_certificate() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "a1 b1\na2 b2\n");
    let good = write(&dir, "good.txt", "a1 b3\na2 b2\na3 b1\n");
    let fig2 = data("fig2.pref");
    let f = fig2.to_str().unwrap();
    let (code, v) = json(&["verify", "--property", "popular", "-i", f, "-m", &bad]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
    assert_eq!(v["certificate"]["kind"], "pp-path-from-unmatched");
    let (code, v) = json(&["verify", "--property", "popular", "-i", f, "-m", &good]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"], Value::Null);
}

#[test]
fn popular_edge_found_and_missing() {
    let fig1 = data("fig1.pref");
    let f = fig1.to_str().unwrap();
    let (code, v) = json(&["popular-edge", "-i", f, "--edge", "a1,b2"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], true);
    assert_eq!(v["branch"], "dominant");

    let dir = TempDir::new().unwrap();
    // {(x,q)} is the only matching with (x,q) and {(x,p), (y,q)} beats it
    let inst = write(
        &dir,
        "g.pref",
        "men: x y\nwomen: p q\nx: p q\ny: q\np: x\nq: y x\n",
    );
    let (code, v) = json(&["popular-edge", "-i", &inst, "--edge", "x,q"]);
    assert_eq!(code, 1);
    assert_eq!(v["found"], false);
}

#[test]
fn popular_vs_stable_routes() {
    let fig1 = data("fig1.pref");
    let f = fig1.to_str().unwrap();
    for extra in [&[][..], &["--cubic"][..]] {
        let mut args = vec!["popular-vs-stable", "-i", f];
        args.extend_from_slice(extra);
        let (code, v) = json(&args);
        assert_eq!(code, 1);
        assert_eq!(v["all_popular_stable"], false);
        assert_eq!(v["blocking_pair"], serde_json::json!(["a1", "b1"]));
    }
    let empty = data("empty.pref");
    let (code, v) = json(&["popular-vs-stable", "-i", empty.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["all_popular_stable"], true);
}

#[test]
fn min_cost_exact() {
    let dir = TempDir::new().unwrap();
    let costs = write(&dir, "c.txt", "a1 b1 1/3\na1 b2 5\na2 b1 -1/2\n");
    let fig1 = data("fig1.pref");
    let (code, v) = json(&[
        "min-cost-dominant",
        "-i",
        fig1.to_str().unwrap(),
        "--costs",
        &costs,
    ]);
    assert_eq!(code, 0);
    // the only dominant matching is {(a1,b2), (a2,b1)}
    assert_eq!(v["cost"], "9/2");
    assert_eq!(v["cost_decimal"], "4.5");

    let partial = write(&dir, "p.txt", "a1 b1 1\n");
    let out = popmatch(&[
        "min-cost-dominant",
        "-i",
        fig1.to_str().unwrap(),
        "--costs",
        &partial,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    let fig1 = data("fig1.pref");
    let f = fig1.to_str().unwrap();
    let count = |what: &str| {
        json(&["enumerate", "--what", what, "-i", f]).1["count"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(count("matchings"), 5);
    assert_eq!(count("stable"), 1);
    assert_eq!(count("popular"), 2);
    assert_eq!(count("dominant"), 1);
    assert_eq!(count("popular-edges"), 3);
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.pref");
    let p = path.to_str().unwrap();
    let args = [
        "gen",
        "--men",
        "5",
        "--women",
        "4",
        "--density",
        "0.6",
        "--seed",
        "11",
        "-o",
        p,
    ];
    let out = popmatch(&args);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    popmatch(&args);
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());
    let (code, v) = json(&["solve", "--property", "stable", "-i", p]);
    assert_eq!(code, 0);
    assert!(v["size"].as_u64().unwrap() <= 4);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.pref", "men: a\nwomen: b\na: b\n");
    let out = popmatch(&["solve", "--property", "stable", "-i", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("popmatch:"));
    assert_eq!(popmatch(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(popmatch(&["--help"]).status.code(), Some(0));
}

#[test]
fn threads_flag_is_accepted() {
    let fig4 = data("fig4.pref");
    let out = popmatch(&[
        "--threads",
        "2",
        "popular-vs-stable",
        "-i",
        fig4.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    assert_eq!(
        popmatch(&["--threads", "0", "solve", "--property", "stable", "-i", "x"])
            .status
            .code(),
        Some(2)
    );
}
