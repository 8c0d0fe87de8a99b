use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ovp(args: &[&str]) -> Output {
    ovp_with_stdin(args, "")
}

fn ovp_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ovp"));
    for (k, _) in std::env::vars() {
        if k.starts_with("OVP_") {
            cmd.env_remove(k);
        }
    }
    let mut child = cmd
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn random_is_reproducible_and_valid() {
    let a = stdout(&ovp(&["random", "--count", "100", "--seed", "7"]));
    let b = stdout(&ovp(&["random", "--count", "100", "--seed", "7"]));
    assert_eq!(a, b);
    let lines: Vec<Value> = a.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 100);
    let lex = ovp_core::Lexicon::embedded();
    for l in &lines {
        let s: ovp_core::SentenceSelections = serde_json::from_value(l["selections"].clone()).unwrap();
        assert!(ovp_core::validate(lex, &s).is_complete());
        assert_eq!(ovp_core::render(lex, &s).unwrap(), l["surface"].as_str().unwrap());
    }
}

#[test]
fn en2ovp_prints_ovp() {
    assert_eq!(stdout(&ovp(&["en2ovp", "I am swimming."])), "nüü pahabi-ti.\n");
    let out = stdout(&ovp(&["en2ovp", "--json", "--score", "She sings."]));
    let r: Value = serde_json::from_str(out.trim()).unwrap();
    assert!(r["scores"]["simple"].as_f64().unwrap() > 0.9);
}

#[test]
fn rankings_with_the_oracle_are_perfect() {
    let out = stdout(&ovp(&["eval", "rankings", "--benchmark", "appendixB", "--backend", "oracle"]));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "ground-truth-oracle");
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(row[3].parse::<f64>().unwrap(), 1.0);
    let per_case = stdout(&ovp(&["eval", "rankings", "--per-case", "--backend", "oracle"]));
    assert_eq!(per_case.lines().count(), 13);
}

#[test]
fn ovp2en_reads_selections() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sel.json");
    std::fs::write(
        &path,
        r#"{"subject":"n.mosquito","subject_suffix":"ss.proximal","object":"n.fish","object_suffix":"os.distal","object_pronoun":"op.him_distal","verb":"vt.cook","verb_tense":"t.present_continuous"}"#,
    )
    .unwrap();
    let out = stdout(&ovp(&["ovp2en", "--selections", path.to_str().unwrap()]));
    let r: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(r["english"], "This mosquito is cooking that fish.");

    let lines = stdout(&ovp(&["random", "--count", "5", "--seed", "1"]));
    let sels: String = lines
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["selections"].to_string() + "\n")
        .collect();
    let out = stdout(&ovp_with_stdin(&["ovp2en", "--selections", "-"], &sels));
    assert_eq!(out.lines().count(), 5);

    std::fs::write(&path, r#"{"subject":"n.mosquito"}"#).unwrap();
    assert_eq!(code(&ovp(&["ovp2en", "--selections", path.to_str().unwrap()])), 65);
}

#[test]
fn dataset_batch_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let records = stdout(&ovp(&["en2ovp", "--dataset", "sample", "--score"]));
    assert_eq!(records.lines().count(), 25);
    let path = dir.path().join("records.jsonl");
    std::fs::write(&path, &records).unwrap();
    let report = stdout(&ovp(&["report", "by-type", "--records", path.to_str().unwrap()]));
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], ovp_core::eval::report::SUMMARY_HEADER);
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.split('\t').nth(2) == Some("5")));
}

#[test]
fn baseline_reports_threshold_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.tsv");
    let out = stdout(&ovp(&["eval", "baseline", "--bins", "10", "--histogram", hist.to_str().unwrap()]));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[1], "7750");
    let (mean, std, thr): (f64, f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap(), row[4].parse().unwrap());
    assert!((thr - (mean + 3.0 * std)).abs() < 2e-3);
    let h = std::fs::read_to_string(hist).unwrap();
    let total: usize = h.lines().skip(1).map(|l| l.split('\t').nth(2).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 7750);
}

#[test]
fn exit_codes_are_distinct() {
    assert_eq!(code(&ovp(&["no-such-command"])), 64);
    assert_eq!(code(&ovp(&["en2ovp"])), 64);
    assert_eq!(code(&ovp(&["en2ovp", "--backend", "oracle", "x"])), 64);
    assert_eq!(code(&ovp(&["report", "by-type", "--records", "/no/such/file"])), 65);
    assert_eq!(code(&ovp(&["en2ovp", "--backend", "live", "x"])), 65);
    assert!(ovp(&["--help"]).status.success());

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ovp.toml");
    std::fs::write(
        &cfg,
        "[chat]\nbase_url = \"http://127.0.0.1:9\"\nmodel = \"m\"\nmax_retries = 0\ntimeout_secs = 2\n",
    )
    .unwrap();
    let o = ovp(&["--config", cfg.to_str().unwrap(), "--backend", "live", "en2ovp", "I read."]);
    assert_eq!(code(&o), 69);
}

#[test]
fn interactive_build_completes_a_sentence() {
    // coyote, proximal, first verb, first tense, no noun object, first prefix
    let o = ovp_with_stdin(&["build"], "1\n1\n1\n1\n0\n1\n");
    let out = stdout(&o);
    let surface = out.trim();
    assert!(surface.starts_with("isha'-ii") && surface.ends_with('.'), "{surface}");
}
