//! End-to-end tests of the command-line interface: exit-code
//! conventions, the documented verdicts on the shipped fixtures, and
//! byte-identical fixture regeneration.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_truecc"))
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn fixture(name: &str) -> String {
    repo_root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn check_reports_the_documented_flags() {
    let out = run(&["check", &fixture("parallel-switch.st.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["closedBoundedIntersections"], false);
    assert_eq!(v["closedBoundedUnions"], true);
    assert_eq!(v["adjacentClosed"], true);
    assert!(v["intersectionWitness"].is_object());

    let out = run(&["check", &fixture("resolved-conflict.st.json")]);
    let v = json_of(&out);
    assert_eq!(v["closedBoundedUnions"], false);
    assert_eq!(v["closedBoundedIntersections"], true);

    let out = run(&["check", &fixture("empty-square.st.json")]);
    let v = json_of(&out);
    assert_eq!(v["adjacentClosed"], true);
    assert_eq!(v["closedBoundedUnions"], false);
    assert_eq!(v["closedBoundedIntersections"], false);
}

#[test]
fn check_tags_degenerate_automata() {
    let out = run(&["check", &fixture("shutdown-square.hda.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    assert!(!v["degenerate_tags"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let out = bin()
        .args(["check", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.as_mut().unwrap().write_all(b"{oops").unwrap();
            child.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_exit_codes_follow_the_verdict() {
    let out = run(&[
        "compare",
        "--mode",
        "hh",
        &fixture("filled-square.st.json"),
        &fixture("empty-square.st.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["equivalent"], false);
    assert!(v["witness"]["distinguishing"].is_array());

    let out = run(&[
        "compare",
        "--mode",
        "hh",
        &fixture("asym-conflict-2.st.json"),
        &fixture("asym-conflict-3.st.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "compare",
        "--mode",
        "iso",
        &fixture("asym-conflict-2.st.json"),
        &fixture("asym-conflict-3.st.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "compare",
        "--mode",
        "cc",
        &fixture("filled-square.st.json"),
        &fixture("empty-square.st.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sculpt_verdicts() {
    assert_eq!(run(&["sculpt", &fixture("angelic.hda.json")]).status.code(), Some(0));
    assert_eq!(run(&["sculpt", &fixture("demonic.hda.json")]).status.code(), Some(1));
    assert_eq!(run(&["sculpt", &fixture("speed-game.hda.json")]).status.code(), Some(1));
    let out = run(&["sculpt", &fixture("angelic.hda.json")]);
    let v = json_of(&out);
    assert_eq!(v["bulkDim"], 3);
}

#[test]
fn trace_counts_paths() {
    let out = run(&[
        "trace",
        &fixture("filled-square.st.json"),
        "--target",
        r#"{"S":["a","b"],"T":["a","b"]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["paths"], 6);
    let first = &v["traces"][0]["trace"];
    assert!(first.as_array().unwrap().len() == 4);
}

#[test]
fn translate_chains_compose() {
    // st -> hda -> st retains hh-equivalence with the source.
    let tmp = std::env::temp_dir().join("truecc-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let hda = tmp.join("fs.hda.json");
    let back = tmp.join("fs-back.st.json");
    let out = run(&[
        "translate",
        &fixture("filled-square.st.json"),
        "--map",
        "stintoh",
        "-o",
        hda.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "translate",
        hda.to_str().unwrap(),
        "--map",
        "hintost",
        "-o",
        back.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "compare",
        "--mode",
        "hh",
        &fixture("filled-square.st.json"),
        back.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn translate_accepts_kind_pairs() {
    let out = bin()
        .args(["translate", &fixture("square.config.json"), "--from", "config", "--to", "st"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "st");
    // The canonical config → st map is the step-preserving one.
    assert_eq!(v["configs"].as_array().unwrap().len(), 9);
}

#[test]
fn encode_round_trip_is_byte_identical() {
    let tmp = std::env::temp_dir().join("truecc-cli-chu");
    std::fs::create_dir_all(&tmp).unwrap();
    let chu = tmp.join("fs.chu.json");
    let back = tmp.join("fs.st.json");
    run(&["encode", &fixture("filled-square.st.json"), "--chu", "3", "-o", chu.to_str().unwrap()]);
    run(&["encode", chu.to_str().unwrap(), "--chu", "3", "--decode", "-o", back.to_str().unwrap()]);
    let original = std::fs::read(fixture("filled-square.st.json")).unwrap();
    let decoded = std::fs::read(&back).unwrap();
    assert_eq!(original, decoded);
}

#[test]
fn refine_through_the_cli() {
    let out = run(&[
        "refine",
        &fixture("chain.st.json"),
        "--image",
        &format!("a={}", fixture("chain.st.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "st");
}

#[test]
fn dot_output_smoke() {
    let out = run(&["check", &fixture("filled-square.st.json"), "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    let out = run(&["check", &fixture("filled-square.hda.json"), "--dot"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("digraph"));
}

#[test]
fn generate_produces_loadable_documents() {
    let out = run(&["generate", "--example", "shutdown-backup", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "stc");
}

/// Every shipped fixture is exactly what its generator produces.
#[test]
fn fixtures_are_fresh() {
    let table: &[(&str, &[&str])] = &[
        ("filled-square.st.json", &["generate", "--example", "filled-square"]),
        ("empty-square.st.json", &["generate", "--example", "empty-square"]),
        ("triangle.st.json", &["generate", "--example", "triangle"]),
        ("chain.st.json", &["generate", "--example", "chain"]),
        ("choice.st.json", &["generate", "--example", "choice"]),
        ("parallel-switch.st.json", &["generate", "--example", "parallel-switch"]),
        ("resolved-conflict.st.json", &["generate", "--example", "resolved-conflict"]),
        ("asym-conflict-2.st.json", &["generate", "--example", "asym-conflict-2"]),
        ("asym-conflict-3.st.json", &["generate", "--example", "asym-conflict-3"]),
        ("shutdown-square.st.json", &["generate", "--example", "shutdown-square"]),
        ("asym-conflict.event.json", &["generate", "--example", "asym-conflict-event"]),
        ("square.config.json", &["generate", "--example", "square-config"]),
        ("filled-square.hda.json", &["generate", "--example", "filled-square-hda"]),
        ("empty-square.hda.json", &["generate", "--example", "empty-square-hda"]),
        ("triangle.hda.json", &["generate", "--example", "triangle-hda"]),
        ("angelic.hda.json", &["generate", "--example", "angelic-hda"]),
        ("demonic.hda.json", &["generate", "--example", "demonic-hda"]),
        ("speed-game.hda.json", &["generate", "--example", "speed-game-hda"]),
        ("cylinder.hda.json", &["generate", "--example", "cylinder-hda"]),
        ("cube-minus-face.hda.json", &["generate", "--example", "cube-minus-face"]),
        (
            "cube-minus-face-dotted.hda.json",
            &["generate", "--example", "cube-minus-face-dotted"],
        ),
        (
            "cube-minus-face-unfolded-dotted.hda.json",
            &["generate", "--example", "cube-minus-face-unfolded-dotted"],
        ),
        ("shutdown-square.hda.json", &["generate", "--example", "shutdown-square-hda"]),
        ("angelic.stc.json", &["generate", "--example", "angelic"]),
        ("demonic.stc.json", &["generate", "--example", "demonic"]),
        ("asym-conflict.stc.json", &["generate", "--example", "asym-conflict-stc"]),
        ("shutdown-backup-k2.stc.json", &["generate", "--example", "shutdown-backup", "--k", "2"]),
        ("filled-square.chu.json", &["generate", "--example", "filled-square-chu"]),
    ];
    let dir = repo_root().join("fixtures");
    let mut listed: Vec<String> = table.iter().map(|(n, _)| n.to_string()).collect();
    listed.sort();
    let mut present: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    present.sort();
    assert_eq!(listed, present, "fixture directory and table diverge");
    for (name, args) in table {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let shipped = std::fs::read(dir.join(name)).unwrap();
        assert_eq!(out.stdout, shipped, "{name} is stale");
    }
}

/// Saving a loaded fixture is byte-identical for every shipped document
/// the strict loader accepts.
#[test]
fn fixtures_round_trip_canonically() {
    let dir = repo_root().join("fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let bytes = std::fs::read(&path).unwrap();
        match truecc::doc::load(&bytes) {
            Ok(doc) => assert_eq!(truecc::doc::save(&doc), bytes, "{}", path.display()),
            Err(_) => {
                // The degenerate automaton is covered by the lenient loader.
                assert!(truecc::doc::load_lenient_hda(&bytes).is_ok(), "{}", path.display());
            }
        }
    }
}
