use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ordertype(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordertype"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn gen_moment_defaults() {
    let dir = TempDir::new().unwrap();
    let o = ordertype(dir.path(), &["gen", "moment", "--dim", "2", "--count", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ordertype-points 2\n1 1\n2 4\n3 9\n");
}

#[test]
fn gen_fractional_moment() {
    let dir = TempDir::new().unwrap();
    let o = ordertype(
        dir.path(),
        &[
            "gen",
            "moment",
            "--dim",
            "2",
            "--count",
            "2",
            "--t-start",
            "1/2",
            "--t-step",
            "1/3",
        ],
    );
    assert_eq!(stdout(&o), "ordertype-points 2\n1/2 1/4\n5/6 25/36\n");
}

#[test]
fn gen_es_monotone_and_capcup() {
    let dir = TempDir::new().unwrap();
    let o = ordertype(dir.path(), &["gen", "es-monotone", "--n", "3"]);
    assert_eq!(stdout(&o), "ordertype-points 1\n3\n4\n1\n2\n");
    let o = ordertype(
        dir.path(),
        &["gen", "es-capcup", "--n", "4", "--out", "cc.txt"],
    );
    assert_eq!(code(&o), 0);
    let body = fs::read_to_string(dir.path().join("cc.txt")).unwrap();
    assert_eq!(body.lines().count(), 7);
}

#[test]
fn gen_random_is_deterministic_and_exhausts() {
    let dir = TempDir::new().unwrap();
    let args = [
        "gen", "random", "--dim", "3", "--count", "5", "--seed", "1", "--bound", "100",
    ];
    let a = ordertype(dir.path(), &args);
    let b = ordertype(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 6);
    let o = ordertype(
        dir.path(),
        &[
            "gen", "random", "--dim", "2", "--count", "10", "--seed", "1", "--bound", "3",
        ],
    );
    assert_eq!(code(&o), 4);
}

#[test]
fn generated_files_parse_back() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec![
            "gen", "moment", "--dim", "4", "--count", "7", "--out", "f.txt",
        ],
        vec!["gen", "es-capcup", "--n", "5", "--out", "f.txt"],
        vec![
            "gen", "random", "--dim", "2", "--count", "20", "--seed", "9", "--bound", "50",
            "--out", "f.txt",
        ],
    ] {
        assert_eq!(code(&ordertype(dir.path(), &args)), 0);
        let text = fs::read_to_string(dir.path().join("f.txt")).unwrap();
        let seq = ordertype_core::pointfile::parse(&text).unwrap();
        assert_eq!(ordertype_core::pointfile::format(&seq), text);
    }
}

#[test]
fn bad_flags_exit_64() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        code(&ordertype(dir.path(), &["gen", "moment", "--dim", "2"])),
        64
    );
    assert_eq!(code(&ordertype(dir.path(), &["frobnicate"])), 64);
    assert_eq!(
        code(&ordertype(
            dir.path(),
            &["gen", "moment", "--dim", "2", "--count", "3", "--t-step", "0"]
        )),
        64
    );
    assert_eq!(
        code(&ordertype(
            dir.path(),
            &["bound", "--dim", "3", "--target", "3"]
        )),
        64
    );
    assert_eq!(code(&ordertype(dir.path(), &["--help"])), 0);
}

#[test]
fn analyze_moment_curve() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "3", "--count", "5", "--out", "m.txt",
        ],
    );
    let o = ordertype(dir.path(), &["analyze", "m.txt"]);
    assert_eq!(code(&o), 0);
    assert!(
        stdout(&o).contains("+1: 5, -1: 0, homogeneous: yes (+1)"),
        "{}",
        stdout(&o)
    );
    let j = json(&ordertype(dir.path(), &["--json", "analyze", "m.txt"]));
    assert_eq!(j["positive"], 5);
    assert_eq!(j["negative"], 0);
    assert_eq!(j["homogeneous"], true);
    assert_eq!(j["sign"], 1);
}

#[test]
fn analyze_decreasing_pair() {
    let dir = TempDir::new().unwrap();
    write(&dir, "p.txt", "ordertype-points 1\n2\n1\n");
    let o = ordertype(dir.path(), &["analyze", "p.txt"]);
    assert!(stdout(&o).contains("+1: 0, -1: 1, homogeneous: yes (-1)"));
}

#[test]
fn analyze_collinear_exits_2_with_witness() {
    let dir = TempDir::new().unwrap();
    write(&dir, "c.txt", "ordertype-points 2\n0 0\n1 1\n2 2\n");
    let o = ordertype(dir.path(), &["analyze", "c.txt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("{0,1,2}"));
}

#[test]
fn parse_failures_exit_65() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.txt", "ordertype-points 2\n1 2 3\n");
    assert_eq!(code(&ordertype(dir.path(), &["analyze", "bad.txt"])), 65);
    write(&dir, "nohdr.txt", "1 2\n");
    assert_eq!(code(&ordertype(dir.path(), &["analyze", "nohdr.txt"])), 65);
    assert_eq!(
        code(&ordertype(dir.path(), &["analyze", "missing.txt"])),
        65
    );
}

#[test]
fn budget_env_var() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "2", "--count", "6", "--out", "m.txt",
        ],
    );
    let o = Command::new(env!("CARGO_BIN_EXE_ordertype"))
        .args(["analyze", "m.txt"])
        .env("ORDERTYPE_BUDGET", "10")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 5);
}

#[test]
fn extract_monotone() {
    let dir = TempDir::new().unwrap();
    write(&dir, "v.txt", "ordertype-points 1\n5\n1\n4\n2\n3\n");
    let o = ordertype(
        dir.path(),
        &["extract", "v.txt", "--target", "3", "--algo", "monotone"],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("size: 3"));
}

#[test]
fn extract_below_target_exits_1() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &["gen", "es-capcup", "--n", "4", "--out", "cc.txt"],
    );
    let o = ordertype(
        dir.path(),
        &["extract", "cc.txt", "--target", "4", "--algo", "cupcap"],
    );
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("size: 3"));
}

#[test]
fn extract_lifting_moment_curve() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "3", "--count", "6", "--out", "m.txt",
        ],
    );
    let j = json(&ordertype(
        dir.path(),
        &[
            "--json", "extract", "m.txt", "--target", "6", "--algo", "lifting",
        ],
    ));
    assert_eq!(j["indices"], serde_json::json!([0, 1, 2, 3, 4, 5]));
    assert_eq!(j["sign"], 1);
    assert_eq!(j["verified"], true);
    let o = ordertype(dir.path(), &["extract", "m.txt", "--target", "6"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn extract_incompatible_algorithm() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "3", "--count", "6", "--out", "m.txt",
        ],
    );
    assert_eq!(
        code(&ordertype(
            dir.path(),
            &["extract", "m.txt", "--target", "4", "--algo", "monotone"]
        )),
        64
    );
    assert_eq!(
        code(&ordertype(
            dir.path(),
            &["extract", "m.txt", "--target", "4", "--algo", "cupcap"]
        )),
        64
    );
}

#[test]
fn brute_dominates_other_algorithms() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let s = seed.to_string();
        ordertype(
            dir.path(),
            &[
                "gen", "random", "--dim", "2", "--count", "14", "--seed", &s, "--bound", "500",
                "--out", "r.txt",
            ],
        );
        let size = |algo: &str| -> u64 {
            json(&ordertype(
                dir.path(),
                &[
                    "--json", "extract", "r.txt", "--target", "5", "--algo", algo,
                ],
            ))["size"]
                .as_u64()
                .unwrap()
        };
        assert!(size("brute") >= size("lifting"));
        assert!(size("brute") >= size("auto"));
    }
}

#[test]
fn verify_moment_curve_and_centroid() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "2", "--count", "6", "--out", "m.txt",
        ],
    );
    let o = ordertype(
        dir.path(),
        &[
            "verify",
            "m.txt",
            "--indices",
            "all",
            "--convex",
            "--cyclic",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "homogeneous: pass (+1)\nconvex: pass\ncyclic: pass\n"
    );

    write(&dir, "t.txt", "ordertype-points 2\n0 0\n3 1\n1 3\n1 1\n");
    let o = ordertype(
        dir.path(),
        &["verify", "t.txt", "--indices", "0,1,2,3", "--convex"],
    );
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("convex: fail"));
    let j = json(&ordertype(
        dir.path(),
        &[
            "--json",
            "verify",
            "t.txt",
            "--indices",
            "0,1,2,3",
            "--convex",
        ],
    ));
    assert_eq!(j["convex"], false);
    assert_eq!(j["pass"], false);
}

#[test]
fn verify_reports_counterexample() {
    let dir = TempDir::new().unwrap();
    write(&dir, "v.txt", "ordertype-points 1\n1\n3\n2\n");
    let o = ordertype(dir.path(), &["verify", "v.txt", "--indices", "0,1,2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        stdout(&o),
        "homogeneous: fail (0,1 has +1 but 1,2 has -1)\n"
    );
}

#[test]
fn verify_budget_exit_5() {
    let dir = TempDir::new().unwrap();
    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "2", "--count", "20", "--out", "m.txt",
        ],
    );
    let o = ordertype(
        dir.path(),
        &["verify", "m.txt", "--indices", "all", "--convex"],
    );
    assert_eq!(code(&o), 5);
}

#[test]
fn bound_values() {
    let dir = TempDir::new().unwrap();
    let o = ordertype(dir.path(), &["bound", "--dim", "1", "--target", "5"]);
    assert_eq!(stdout(&o).lines().next(), Some("17"));
    let o = ordertype(dir.path(), &["bound", "--dim", "2", "--target", "4"]);
    assert_eq!(stdout(&o).lines().next(), Some("2^186"));
    let o = ordertype(dir.path(), &["bound", "--dim", "4", "--target", "50"]);
    assert_eq!(stdout(&o).lines().next(), Some("twr_4(O(50))"));
    assert!(stdout(&o).contains("known: "));
    let j = json(&ordertype(
        dir.path(),
        &["--json", "bound", "--dim", "2", "--target", "4"],
    ));
    assert_eq!(j["kind"], "power_of_two");
    assert_eq!(j["value"], "186");
}

#[test]
fn plot_svg() {
    let dir = TempDir::new().unwrap();
    write(&dir, "cup.txt", "ordertype-points 2\n0 3\n1 1\n2 0\n4 2\n");
    let o = ordertype(
        dir.path(),
        &["plot", "cup.txt", "--out", "a.svg", "--indices", "0,1,2,3"],
    );
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert!(svg.contains(r#"version="1.1""#));
    assert_eq!(svg.matches("<circle").count(), 4);
    assert_eq!(svg.matches("<polyline").count(), 1);
    for i in 0..4 {
        assert!(svg.contains(&format!(">{i}</text>")));
    }
    ordertype(dir.path(), &["plot", "cup.txt", "--out", "b.svg"]);
    let plain = fs::read_to_string(dir.path().join("b.svg")).unwrap();
    assert_eq!(plain.matches("<polyline").count(), 0);
    ordertype(
        dir.path(),
        &["plot", "cup.txt", "--out", "c.svg", "--indices", "0,1,2,3"],
    );
    assert_eq!(
        fs::read(dir.path().join("a.svg")).unwrap(),
        fs::read(dir.path().join("c.svg")).unwrap()
    );

    ordertype(
        dir.path(),
        &[
            "gen", "moment", "--dim", "3", "--count", "4", "--out", "m.txt",
        ],
    );
    assert_eq!(
        code(&ordertype(dir.path(), &["plot", "m.txt", "--out", "m.svg"])),
        64
    );
}

#[test]
fn json_errors_are_json() {
    let dir = TempDir::new().unwrap();
    write(&dir, "c.txt", "ordertype-points 2\n0 0\n1 1\n2 2\n");
    let o = ordertype(dir.path(), &["--json", "analyze", "c.txt"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["exit_code"], 2);
}
