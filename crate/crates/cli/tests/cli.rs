use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::io::Write;

use absq_cli::HeaderLine;
use absq_core::{ConjectureReport, CountResult, LemmaCheckResult, MaxSearchResult, ProofStepCounterexample};

fn absq(args: &[&str], input: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_absq"))
        .args(args)
        .env_remove("ABSQ_WORKERS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn absq");
    {
        let mut stdin = child.stdin.take().unwrap();
        if let Some(text) = input {
            stdin.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| serde_json::from_str::<HeaderLine>(l).is_err())
        .collect()
}

/// Every record re-parses into its domain type and re-serializes identically.
fn assert_round_trip<T>(text: &str) -> Vec<T>
where
    T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug,
{
    data_lines(text)
        .into_iter()
        .map(|line| {
            let value: T = serde_json::from_str(line).unwrap_or_else(|e| panic!("{line}: {e}"));
            assert_eq!(serde_json::to_string(&value).unwrap(), line);
            value
        })
        .collect()
}

#[test]
fn count_reads_stdin_and_files() {
    let o = absq(&["count", "--no-timestamp"], Some("aabb\n\nabba\n"));
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<CountResult> = assert_round_trip(&stdout(&o));
    assert_eq!(records.iter().map(|r| r.k).collect::<Vec<_>>(), vec![2, 0, 2]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("words.txt");
    std::fs::write(&path, "aaaa\nabab\n").unwrap();
    let o = absq(&["count", "--no-timestamp", path.to_str().unwrap()], None);
    let records: Vec<CountResult> = assert_round_trip(&stdout(&o));
    assert_eq!(records.iter().map(|r| r.k).collect::<Vec<_>>(), vec![2, 1]);
}

#[test]
fn count_rejects_bad_symbols() {
    let o = absq(&["count"], Some("aa\na1b\n"));
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("'1'"), "{err}");
}

#[test]
fn io_errors_exit_3() {
    let o = absq(&["count", "/nonexistent/words.txt"], None);
    assert_eq!(o.status.code(), Some(3));
    let o = absq(&["verify", "--n", "3", "--out", "/nonexistent/dir/out.jsonl"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(absq(&["sequence", "--n-max", "0"], None).status.code(), Some(2));
    assert_eq!(absq(&["falsify"], None).status.code(), Some(2));
    assert_eq!(absq(&["max", "--n", "3", "--workers", "0"], None).status.code(), Some(2));
    assert_eq!(absq(&["lemma", "--n", "3", "--sigma", "1"], None).status.code(), Some(2));
}

#[test]
fn verify_lemma_falsify_outcomes() {
    let o = absq(&["verify", "--n", "4", "--sigma-max", "3", "--no-timestamp"], None);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<ConjectureReport> = assert_round_trip(&stdout(&o));
    assert!(reports[0].holds && reports[0].b == 2);

    let o = absq(&["lemma", "--n", "2", "--sigma", "3", "--no-timestamp"], None);
    assert_eq!(o.status.code(), Some(0));
    let lemma: Vec<LemmaCheckResult> = assert_round_trip(&stdout(&o));
    assert!(lemma[0].holds);

    let o = absq(&["falsify", "--n-max", "4", "--no-timestamp"], None);
    assert_eq!(o.status.code(), Some(0));
    let found: Vec<ProofStepCounterexample> = assert_round_trip(&stdout(&o));
    assert!(found.iter().any(|c| c.w.to_string() == "aaba" && c.claim_id.as_str() == "conjecture-step-kplus1"));
}

#[test]
fn max_and_sequence_records_round_trip() {
    let o = absq(&["max", "--n", "6", "--sigma-max", "3", "--constrained", "--no-timestamp"], None);
    assert_eq!(o.status.code(), Some(0));
    let r: Vec<MaxSearchResult> = assert_round_trip(&stdout(&o));
    assert!(r[0].constrained && r[0].max_k == 4);

    let o = absq(&["sequence", "--n-max", "4", "--sigma-max", "3", "--no-timestamp"], None);
    let rows: Vec<absq_cli::SequenceRow> = assert_round_trip(&stdout(&o));
    assert_eq!(rows.last().unwrap().b, 2);
    assert_eq!(rows.last().unwrap().binary_witness.to_string(), "aaaa");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["verify", "--n-max", "7", "--sigma-max", "3", "--no-timestamp"];
    let a = absq(&args, None);
    let b = absq(&args, None);
    assert_eq!(a.stdout, b.stdout);
    // Without suppression, only the volatile line differs in kind.
    let c = absq(&args[..5], None);
    let text = stdout(&c);
    assert!(text.lines().next().unwrap().starts_with("{\"volatile\":"));
    assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), stdout(&a).lines().collect::<Vec<_>>());
}

#[test]
fn worker_env_var_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_absq"))
        .args(["max", "--n", "5"])
        .env("ABSQ_WORKERS", "3")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"workers\":3"));
    let out = Command::new(env!("CARGO_BIN_EXE_absq"))
        .args(["max", "--n", "5", "--workers", "2"])
        .env("ABSQ_WORKERS", "3")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"workers\":2"));
}

#[test]
fn out_file_mirrors_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lemma.jsonl");
    let o = absq(
        &["lemma", "--n-max", "5", "--sigma", "3", "--format", "text", "--no-timestamp", "--out", path.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let jsonl = absq(&["lemma", "--n-max", "5", "--sigma", "3", "--no-timestamp"], None);
    assert_eq!(std::fs::read(&path).unwrap(), jsonl.stdout);
}

fn checkpoint_run(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["max", "--n", "9", "--sigma-max", "3", "--no-timestamp", "--checkpoint", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    absq(&args, None)
}

#[test]
fn checkpoint_interrupt_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("max.ckpt");
    let partial = checkpoint_run(&path, &["--stop-after", "20"]);
    assert_eq!(partial.status.code(), Some(4));
    assert!(stdout(&partial).contains("INCOMPLETE"));
    let resumed = checkpoint_run(&path, &[]);
    assert_eq!(resumed.status.code(), Some(0));
    let straight = absq(&["max", "--n", "9", "--sigma-max", "3", "--no-timestamp"], None);
    assert_eq!(resumed.stdout, straight.stdout);
}

#[test]
fn checkpoint_mismatch_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("max.ckpt");
    checkpoint_run(&path, &["--stop-after", "3"]);
    let other = absq(&["max", "--n", "8", "--checkpoint", path.to_str().unwrap()], None);
    assert_eq!(other.status.code(), Some(2));
    assert!(String::from_utf8(other.stderr).unwrap().contains("different parameters"));

    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("{\"prefix\":\"aab\",\"res");
    std::fs::write(&path, text).unwrap();
    let corrupt = checkpoint_run(&path, &[]);
    assert_eq!(corrupt.status.code(), Some(3));
    assert!(String::from_utf8(corrupt.stderr).unwrap().contains("corrupt checkpoint"));
}

#[test]
fn csv_sequence_has_expected_columns() {
    let o = absq(&["sequence", "--n-max", "3", "--sigma-max", "4", "--format", "csv", "--no-timestamp"], None);
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("n,B,A3,A4,binary_witness"));
    assert_eq!(lines.next(), Some("1,0,0,0,a"));
}
