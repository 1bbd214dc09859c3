use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn polybary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybary"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_cube_center_then_check_cert() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let cube = data("cube4.json");
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&cube),
        "--point",
        "0,0,0,0",
        "--n",
        "2",
        "--out",
        path_str(&cert),
    ]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(json["points"].as_array().unwrap().len(), 2);
    for f in json["faces"].as_array().unwrap() {
        assert_eq!(f["dim"], 2);
    }

    let check = polybary(&[
        "check-cert",
        "--polytope",
        path_str(&cube),
        "--cert",
        path_str(&cert),
    ]);
    assert_eq!(status(&check), 0);
    assert!(String::from_utf8_lossy(&check.stdout).contains("exact: true"));
}

#[test]
fn single_point_decomposition_is_the_point() {
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&data("cube4.json")),
        "--point",
        "1/4,1/3,0,-1",
        "--n",
        "1",
    ]);
    assert_eq!(status(&out), 0);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["points"], serde_json::json!([["1/4", "1/3", "0", "-1"]]));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let rect = data("rectangle.json");
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&rect),
        "--point",
        "1/2,1/3",
        "--n",
        "2",
        "--out",
        path_str(&cert),
    ]);
    assert_eq!(status(&out), 0);
    let mut json: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    json["points"][0][1] = Value::from("7/5");
    fs::write(&cert, json.to_string()).unwrap();
    let check = polybary(&[
        "check-cert",
        "--polytope",
        path_str(&rect),
        "--cert",
        path_str(&cert),
    ]);
    assert_eq!(status(&check), 65);
}

#[test]
fn via_proof_agrees_with_check_cert() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let rect = data("rectangle.json");
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&rect),
        "--point",
        "3/4,1/5",
        "--n",
        "2",
        "--via-proof",
        "--seed",
        "3",
        "--out",
        path_str(&cert),
    ]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let check = polybary(&[
        "check-cert",
        "--polytope",
        path_str(&rect),
        "--cert",
        path_str(&cert),
    ]);
    assert_eq!(status(&check), 0);
}

#[test]
fn trace_emits_json_lines_ending_in_result() {
    let out = polybary(&[
        "trace",
        "--polytope",
        path_str(&data("rectangle.json")),
        "--point",
        "1,1/2",
        "--n",
        "2",
    ]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.first().unwrap()["stage"], "normalize");
    assert_eq!(lines.last().unwrap()["stage"], "result");
}

#[test]
fn trace_rejects_composite_n() {
    let out = polybary(&[
        "trace",
        "--polytope",
        path_str(&data("cube4.json")),
        "--point",
        "0,0,0,0",
        "--n",
        "4",
    ]);
    assert_eq!(status(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("use decompose"));
}

#[test]
fn skeleton_dimension_mismatch_is_an_error() {
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&data("cube4.json")),
        "--point",
        "0,0,0,0",
        "--n",
        "2",
        "--d",
        "1",
    ]);
    assert_eq!(status(&out), 65);
}

#[test]
fn bad_flags_and_files_map_to_exit_codes() {
    assert_eq!(status(&polybary(&["decompose", "--n", "2"])), 64);
    assert_eq!(status(&polybary(&["no-such-command"])), 64);

    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{ not json").unwrap();
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&junk),
        "--point",
        "0",
        "--n",
        "1",
    ]);
    assert_eq!(status(&out), 65);
    let out = polybary(&[
        "decompose",
        "--polytope",
        path_str(&data("cube4.json")),
        "--point",
        "2,0,0,0",
        "--n",
        "2",
    ]);
    assert_eq!(status(&out), 65);
}

#[test]
fn gen_is_deterministic_and_atomic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = polybary(&[
            "gen",
            "--dim",
            "3",
            "--facets",
            "7",
            "--seed",
            "42",
            "--out",
            path_str(path),
        ]);
        assert_eq!(status(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "no temporary files left behind");
    let json: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(json["ambient_dim"], 3);
    assert_eq!(json["hrep"]["b"].as_array().unwrap().len(), 7);

    assert_eq!(status(&polybary(&["gen", "--dim", "9", "--facets", "12"])), 65);
}

#[test]
fn verify_minkowski_exits_zero() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = polybary(&[
        "verify-minkowski",
        "--polytope",
        path_str(&data("rectangle.json")),
        "--n",
        "2",
        "--samples",
        "20",
        "--seed",
        "1",
        "--threads",
        "2",
        "--out",
        path_str(&report),
    ]);
    assert_eq!(status(&out), 0);
    let json: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["verdict"], "verified");
    assert_eq!(json["seed"], 1);
}

#[test]
fn falsifiers_exit_two_on_counterexample() {
    let out = polybary(&["falsify-simplex", "--a", "0", "--b", "3", "--d", "1"]);
    assert_eq!(status(&out), 2);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["counterexample"]["tuples"], 4);

    let out = polybary(&[
        "falsify-simplex",
        "--a",
        "1",
        "--b",
        "2",
        "--d",
        "1",
        "--samples",
        "10",
    ]);
    assert_eq!(status(&out), 0);

    let out = polybary(&[
        "falsify-prism",
        "--eps",
        "3/2",
        "--max-level",
        "3",
        "--per-level",
        "32",
    ]);
    assert_eq!(status(&out), 2);

    assert_eq!(status(&polybary(&["falsify-prism", "--eps", "0"])), 65);
    assert_eq!(
        status(&polybary(&[
            "falsify-simplex",
            "--a",
            "1",
            "--b",
            "1",
            "--d",
            "1"
        ])),
        65
    );
}
