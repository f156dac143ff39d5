use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_editcodes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn member_zero_word() {
    let o = run(&["member", "code=C2S", "n=10", "b0=0", "b1=0", "b2=0", "x=0000000000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "true"), "{out}");
    assert!(out.contains("b2"));
}

#[test]
fn member_reports_failed_condition() {
    let o = run(&["--format", "json", "member", "code=C2S", "n=4", "b0=1", "b1=0", "b2=0", "x=0000"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], Value::Bool(false));
    assert_eq!(v["counts"]["failed"], 1);
}

#[test]
fn common_subsequence_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two_words.txt");
    fs::write(&path, "001001\n000110\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["verify", "--words", p, "--channel", "0,2,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness common: 0000"));

    let o = run(&["--format", "json", "verify", "--words", p, "--channel", "0,2,0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["config", "counts", "elapsed_ms", "verdict", "witness"]);
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["witness"]["common"], "0000");
    assert_eq!(v["witness"]["words"], serde_json::json!(["000110", "001001"]));
    assert_eq!(v["config"]["channel"], "0,2,0");
}

#[test]
fn lemma_suite_certifies() {
    let o = run(&["lemma-suite", "--n-max", "8", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: certified"));
}

#[test]
fn channel_requires_seed_and_is_deterministic() {
    let o = run(&["channel", "0110100111", "--edits", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));

    let args = ["--format", "json", "channel", "0110100111", "--t1", "1", "--t3", "1", "--seed", "9"];
    let mut a = json(&run(&args));
    let mut b = json(&run(&args));
    a.as_object_mut().unwrap().remove("elapsed_ms");
    b.as_object_mut().unwrap().remove("elapsed_ms");
    assert_eq!(a, b);
    assert_eq!(a["config"]["seed"], 9);
    assert_eq!(a["result"]["received"].as_str().unwrap().len(), 11);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["member", "code=C2S", "n=10", "b0=0", "b1=0", "b2=0", "q=1", "x=0000000000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"q\""));

    let o = run(&["ball", "01x1", "--channel", "0,1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("word"));

    let o = run(&["ball", "0101", "--channel", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--channel"));

    let o = run(&["verify", "--code", "code=C2S n=6 b0=0 b1=0 b2=0", "--channel", "0,0,2", "--p-bounded", "2", "--list", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["member", "code=C2D n=16 mode=paper ell=3", "x=0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decode_outcomes_and_exit_codes() {
    let o = run(&["decode", "--code", "code=C2S n=10", "--anchor", "x=0110100111", "--received", "0111100101"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("unique 0110100111"), "{out}");
    assert!(out.contains("substitutions at 4,9"));

    let o = run(&["decode", "--code", "code=C2S n=10", "--anchor", "0110100111", "--received", "1111111111"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["decode", "--code", "code=C2E n=8 ell=3 eps=1/3 P=2", "--anchor", "00110011", "--received", "0010011"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unique 00110011"));
}

#[test]
fn decode_file_of_received_words() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("received.txt");
    fs::write(&path, "011010111\n111010111\n").unwrap();
    let o = run(&[
        "--format", "json", "decode", "--code", "code=LEV n=10", "--anchor", "0110100111",
        "--received", path.to_str().unwrap(), "--channel", "0,1,0",
    ]);
    let v = json(&o);
    assert_eq!(v["result"][0]["codewords"], serde_json::json!(["0110100111"]));
    assert_eq!(v["counts"]["received"], 2);
}

#[test]
fn enumerate_then_verify_class() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("class.txt");
    let o = run(&["enumerate", "code=LEV", "n=9", "a=0", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let words: Vec<&str> = text.lines().collect();
    assert!(stderr(&o).starts_with("config: "));
    assert!(words.len() > 10);
    assert!(words.iter().all(|w| w.len() == 9));

    let words_path = path;
    let o = run(&["verify", "--words", words_path.to_str().unwrap(), "--edits", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "--words", words_path.to_str().unwrap(), "--edits", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_class_by_spec_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&[
        "--format", "json", "verify", "--code", "code=C2S n=10", "--anchor", "0110100111",
        "--channel", "0,0,2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["config"]["code"], "C2S");
    assert_eq!(v["config"]["b1"], "37");
}

#[test]
fn paper_mode_config_is_echoed() {
    let o = run(&["--format", "json", "member", "code=C2E_L", "n=12", "x=010011010110"]);
    assert_eq!(o.status.code(), Some(2), "residues are required");
    let o = run(&["--format", "json", "member", "code=C2E_L", "n=12", "--anchor", "010011010110", "x=010011010110"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], Value::Bool(true));
    assert_eq!(v["config"]["mode"], "paper");
    assert_eq!(v["config"]["ell"], "4647");
}

#[test]
fn stats_and_streams() {
    let o = run(&["stats", "code=C2S", "n=10"]);
    let v: Value = serde_json::from_str(stdout(&o).split_once('\n').unwrap().1).unwrap();
    assert_eq!(v["classes"], 908);
    assert_eq!(v["max_size"], 3);
    assert!(v["redundancy_bits"].as_f64().unwrap() > 8.0);

    let o = run(&["ball", "0", "--edits", "1"]);
    assert_eq!(stdout(&o).lines().count(), 6);

    let o = run(&["syndrome", "10111001", "0110", "-k", "1"]);
    assert_eq!(stdout(&o), "21\n5\n");

    let o = run(&["balance", "0101", "--ell", "2"]);
    assert!(stdout(&o).contains("locally_balanced: true"));
}
