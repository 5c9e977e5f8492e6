use std::path::Path;
use std::process::{Command, Output};

use wardplan::instgen::generate_tiny;
use wardplan::model::{RoomAssignment, Solution};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wardplan")).args(args).current_dir(dir).output().expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn solve_then_evaluate_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generate_tiny(2).save(dir.join("t.json")).unwrap();
    let out = run(dir, &["solve", "--instance", "t.json", "--out", "s.json"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("wall-clock"));

    let out = run(dir, &["evaluate", "--instance", "t.json", "--solution", "s.json"]);
    let body = text(&out.stdout);
    let json_end = body.find("\n\n").unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&body[..json_end]).unwrap();
    assert!(parsed["weighted_total"].is_number());
    assert!(body.contains("Weighted total"));

    let out = run(dir, &["report", "--instance", "t.json", "--solution", "s.json"]);
    let body = text(&out.stdout);
    for section in ["Room occupancy", "Nurse loads", "Objectives", "Transfers"] {
        assert!(body.contains(section), "{section} missing");
    }
}

#[test]
fn infeasible_solution_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let inst = generate_tiny(2);
    inst.save(dir.join("t.json")).unwrap();
    let p = &inst.patients[0];
    let sol = Solution {
        schema_version: 1,
        instance_ref: String::new(),
        room_of: vec![RoomAssignment { patient: p.id.clone(), day: 1, room: inst.rooms[0].id.clone() }],
        nurse_of: Vec::new(),
    };
    sol.save(dir.join("bad.json")).unwrap();
    let out = run(dir, &["evaluate", "--instance", "t.json", "--solution", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir, &["report", "--instance", "t.json", "--solution", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stdout).starts_with("infeasible: "));
}

#[test]
fn bad_input_exits_with_4() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("junk.json"), "{ not json").unwrap();
    for args in [
        vec!["solve", "--instance", "junk.json"],
        vec!["generate", "--preset", "nope"],
        vec!["roster", "--days", "2", "--per-shift", "4:1", "--nurses", "3"],
        vec!["export", "--model", "npa", "--instance", "junk.json"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(dir, &args).status.code(), Some(4), "{args:?}");
    }
}

#[test]
fn infeasible_roster_exits_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["roster", "--days", "2", "--per-shift", "3:2", "--nurses", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_seed_list_gives_empty_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = run(dir, &["bench", "--preset", "realward", "--weeks", "1", "--seeds", "0", "--out", "b"]);
    assert!(out.status.success());
    let runs = std::fs::read_to_string(dir.join("b/runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("b/bench.json")).unwrap()).unwrap();
    assert_eq!(json["runs"].as_array().unwrap().len(), 0);
}

#[test]
fn generate_batch_writes_one_file_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = run(dir, &["generate", "--preset", "realward", "--count", "3", "--seed", "5", "--out", "d"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let mut names: Vec<String> = std::fs::read_dir(dir.join("d"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["realward-5.json", "realward-6.json", "realward-7.json"]);
}
