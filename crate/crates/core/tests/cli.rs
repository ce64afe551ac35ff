mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use common::*;

fn path(rel: &str) -> String {
    data(rel).display().to_string()
}

#[test]
fn replayed_generation_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let expected = read(&data(SAMPLE_MESSAGE));
    for _ in 0..3 {
        let (code, out, err) = omega(dir.path(), &["generate", "--fixture", &path(SAMPLE_FIXTURE), "--replay", &path(SAMPLE_CAPTURE)]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out, expected);
    }
}

#[test]
fn generate_json_carries_context_and_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = omega(
        dir.path(),
        &["generate", "--fixture", &path(SAMPLE_FIXTURE), "--replay", &path(SAMPLE_CAPTURE), "--json"],
    );
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(format!("{}\n", v["text"].as_str().unwrap()), read(&data(SAMPLE_MESSAGE)));
    assert_eq!(v["context"]["issues"][0]["id"], 42);
    assert_eq!(v["transcript"][0]["role"], "system");
    assert_eq!(v["options"]["use_cmms"], true);
    assert!(v["prompt_versions"].as_object().unwrap().len() >= 6);
}

#[test]
fn replay_of_a_different_arm_misses() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = omega(
        dir.path(),
        &["generate", "--fixture", &path(SAMPLE_FIXTURE), "--replay", &path(SAMPLE_CAPTURE), "--no-fidex", "--no-cmms"],
    );
    // Method summaries of the other arm were never recorded.
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("no recorded response"), "{err}");
}

#[test]
fn narrate_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_omega"))
        .args(["narrate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(read(&data("golden/mixed.diff")).as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), read(&data("golden/mixed.narrative.txt")));
}

#[test]
fn offline_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let (code, out, _) = omega(d, &["explain", &path("sample/commit.diff"), "--dry-run", "--json"]);
    assert_eq!(code, 0);
    let conv: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(conv.as_array().unwrap().len(), 6);

    let (code, out, _) = omega(d, &["strip-docs", &path("java_corpus/Inventory.java")]);
    assert_eq!(code, 0);
    assert!(!out.contains("/**") && out.contains("class Inventory"));

    let (code, out, _) = omega(d, &["units", &path("java_corpus/Inventory.java")]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("method Inventory#add(")));

    let (code, out, _) = omega(d, &["evaluate", &path("eval/pairs.jsonl"), "--table"]);
    assert_eq!(code, 0);
    assert!(out.contains("Reference OMG") && out.contains("Reference Human") && out.contains("ROUGE-L"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(omega(d, &["no-such-command"]).0, 2);
    assert_eq!(omega(d, &["generate"]).0, 2, "neither --commit nor --fixture");
    let (code, out, _) = omega(d, &["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("generate"));

    let (code, out, err) = omega(d, &["narrate", "/no/such.diff"]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.starts_with("error:"));

    let (code, _, err) = omega(d, &["generate", "--fixture", &path(SAMPLE_FIXTURE), "--replay", "/no/capture.jsonl"]);
    assert_eq!(code, 2, "{err}");

    std::fs::write(d.join("omega.toml"), "temperature = 0.7\n").unwrap();
    let (code, _, err) = omega(d, &["evaluate", &path("eval/pairs.jsonl")]);
    assert_eq!(code, 2);
    assert!(err.contains("temperature"), "{err}");

    std::fs::write(d.join("bad.diff"), "@@ -1,2 +1,2 @@\n-a\n").unwrap();
    std::fs::write(d.join("omega.toml"), "").unwrap();
    assert_eq!(omega(d, &["narrate", "bad.diff"]).0, 1);
}

#[test]
fn generate_against_an_unreachable_endpoint_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("omega.toml"),
        "endpoint_url = \"http://127.0.0.1:9\"\n[retry]\nmax_attempts = 1\nbase_delay_ms = 1\n",
    )
    .unwrap();
    let (code, out, err) = omega(dir.path(), &["generate", "--fixture", &path(SAMPLE_FIXTURE)]);
    assert_eq!(code, 1, "{err}");
    assert!(out.is_empty());
}
