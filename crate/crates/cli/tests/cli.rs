use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn lcpk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcpk")).args(args).env_remove("LCPK_TOL").output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = lcpk(args);
    let code = out.status.code().expect("exit code");
    let text = String::from_utf8(out.stdout).unwrap();
    let value = if text.trim().is_empty() { Value::Null } else { serde_json::from_str(&text).expect("JSON report") };
    (code, value)
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn classify_block_k_fixture() {
    let f = fixture("paper_block_k.json");
    let (code, v) = run(&["classify", arg(&f)]);
    assert_eq!(code, 0);
    let verdicts = &v["report"]["verdicts"];
    assert_eq!(verdicts["P"], "true");
    assert_eq!(verdicts["block_triangular_K"], "true");
    assert_eq!(verdicts["diagonal_blocks_K"], "true");
    assert_eq!(verdicts["Z"], "false");
}

#[test]
fn classify_rejects_printed_hidden_witnesses() {
    let (code, v) = run(&["classify", arg(&fixture("paper_hidden.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["verdicts"]["hidden_block_triangular_K"], "false");
    let (code, v) = run(&["classify", arg(&fixture("hidden_exact.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["verdicts"]["hidden_block_triangular_K"], "true");
}

#[test]
fn every_method_solves_the_block_k_fixture() {
    let f = fixture("paper_block_k.json");
    for method in ["lemke", "lp", "block", "oracle"] {
        let (code, v) = run(&["solve", arg(&f), "--method", method]);
        assert_eq!(code, 0, "{method}");
        let sol = if method == "oracle" { &v["solutions"][0] } else { &v["solution"] };
        let z: Vec<f64> = serde_json::from_value(sol["z"].clone()).unwrap();
        let expected = [6.0, 5.0, 0.0, 0.0, 0.0, 0.0];
        assert!(z.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-9), "{method}: {z:?}");
    }
}

#[test]
fn nonnegative_q_gives_zero() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("hidden_exact.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["q"] = serde_json::json!([1.0, 0.0, 2.0, 0.5]);
    let f = write(dir.path(), "pos.json", &v.to_string());
    for method in ["lemke", "lp", "oracle", "augmented"] {
        let (code, r) = run(&["solve", arg(&f), "--method", method]);
        assert_eq!(code, 0, "{method}");
        let sol = if method == "oracle" { &r["solutions"][0] } else { &r["solution"] };
        let z: Vec<f64> = serde_json::from_value(sol["z"].clone()).unwrap();
        assert!(z.iter().all(|x| *x == 0.0), "{method}: {z:?}");
    }
}

#[test]
fn gen_count_zero_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("none");
    assert_eq!(run(&["gen", "--kind", "k", "--count", "0", "--out", arg(&out)]).0, 0);
    assert!(!out.exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // No solution: infeasible at q = -e.
    assert_eq!(run(&["solve", arg(&fixture("hidden_exact.json")), "--method", "oracle"]).0, 1);
    assert_eq!(run(&["solve", arg(&fixture("hidden_exact.json"))]).0, 1);
    // Parse errors.
    assert_eq!(lcpk(&["solve", arg(&write(d, "bad.json", "{"))]).status.code(), Some(2));
    assert_eq!(lcpk(&["solve", arg(&write(d, "extra.json", r#"{"M":[[1]],"q":[1],"z":1}"#))]).status.code(), Some(2));
    // Shape errors.
    let ragged = write(d, "ragged.json", r#"{"M":[[1,0],[1]],"q":[1,1]}"#);
    assert_eq!(lcpk(&["solve", arg(&ragged)]).status.code(), Some(3));
    let short_q = write(d, "q.json", r#"{"M":[[1,0],[0,1]],"q":[1]}"#);
    assert_eq!(lcpk(&["solve", arg(&short_q)]).status.code(), Some(3));
    // Preconditions: bad witnesses, too large for the oracle, not block triangular K.
    let printed = fixture("paper_hidden.json");
    assert_eq!(lcpk(&["solve", arg(&printed), "--method", "lp", "--p", "derived"]).status.code(), Some(4));
    let n = 13;
    let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let big = serde_json::json!({"M": m, "q": vec![-1.0; n]}).to_string();
    assert_eq!(lcpk(&["solve", arg(&write(d, "big.json", &big)), "--method", "oracle"]).status.code(), Some(4));
    let not_k = write(d, "notk.json", r#"{"M":[[-1,0],[0,1]],"q":[1,1],"block_size":1}"#);
    assert_eq!(lcpk(&["solve", arg(&not_k), "--method", "block"]).status.code(), Some(4));
    // I/O.
    assert_eq!(lcpk(&["solve", arg(&d.join("missing.json"))]).status.code(), Some(5));
}

#[test]
fn gen_is_deterministic_and_sharded_by_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    for kind in ["k", "block-k", "block-k-z", "hidden"] {
        let common = ["gen", "--kind", kind, "--blocks", "3", "--block-size", "2"];
        let mut args = common.to_vec();
        args.extend(["--seed", "7", "--count", "3", "--out", arg(a.path())]);
        assert_eq!(run(&args).0, 0);
        args.pop();
        args.push(arg(b.path()));
        assert_eq!(run(&args).0, 0);
        let mut shard = common.to_vec();
        shard.extend(["--seed", "9", "--count", "1", "--out", arg(c.path())]);
        assert_eq!(run(&shard).0, 0);
        let prefix = kind;
        for i in 0..3 {
            let name = format!("{prefix}-{i:04}.json");
            let x = std::fs::read(a.path().join(&name)).unwrap();
            assert_eq!(x, std::fs::read(b.path().join(&name)).unwrap(), "{name}");
        }
        // File 2 of seed 7 is file 0 of seed 9.
        assert_eq!(
            std::fs::read(a.path().join(format!("{prefix}-0002.json"))).unwrap(),
            std::fs::read(c.path().join(format!("{prefix}-0000.json"))).unwrap()
        );
    }
}

#[test]
fn generated_files_classify_as_their_kind() {
    let dir = tempfile::tempdir().unwrap();
    let d = arg(dir.path());
    run(&["gen", "--kind", "block-k", "--blocks", "3", "--block-size", "2", "--seed", "7", "--out", d]);
    let (_, v) = run(&["classify", arg(&dir.path().join("block-k-0000.json"))]);
    assert_eq!(v["report"]["verdicts"]["block_triangular_K"], "true");
    run(&["gen", "--kind", "hidden", "--blocks", "2", "--block-size", "2", "--seed", "7", "--out", d]);
    // Hidden witnesses have nonpositive off-diagonal blocks: K only on the diagonal.
    let hidden = dir.path().join("hidden-0000.json");
    let (_, v) = run(&["classify", arg(&hidden), "--relaxed"]);
    assert_eq!(v["report"]["verdicts"]["hidden_block_triangular_K"], "true");
    let (_, v) = run(&["classify", arg(&hidden)]);
    assert_eq!(v["report"]["verdicts"]["hidden_block_triangular_K"], "false");
    let (code, _) = run(&["solve", arg(&dir.path().join("hidden-0000.json")), "--method", "augmented"]);
    assert_eq!(code, 0);
}

#[test]
fn generated_files_are_canonical() {
    let dir = tempfile::tempdir().unwrap();
    run(&["gen", "--kind", "hidden", "--seed", "3", "--out", arg(dir.path())]);
    let path = dir.path().join("hidden-0000.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let again = lcpk::instance::InstanceFile::parse(&text).unwrap().to_canonical_json() + "\n";
    assert_eq!(text, again);
}

#[test]
fn reports_are_deterministic() {
    let f = fixture("paper_block_k.json");
    for args in [
        vec!["classify", arg(&f), "--seed", "4"],
        vec!["verify", arg(&f), "--suite", "least", "--seed", "4", "--samples", "50"],
    ] {
        assert_eq!(lcpk(&args).stdout, lcpk(&args).stdout);
    }
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let (_, a) = run(&["solve", arg(&f)]);
    let (_, b) = run(&["solve", arg(&f)]);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn verify_examples() {
    let (code, v) = run(&["verify", arg(&fixture("paper_block_k.json")), "--suite", "least"]);
    assert_eq!(code, 0);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));

    let (code, v) = run(&["verify", arg(&fixture("paper_hidden.json")), "--suite", "q0", "--samples", "500"]);
    assert_eq!(code, 0);
    assert!(v["results"][0]["detail"].as_str().unwrap().contains("no counterexample"));

    let (code, v) = run(&["verify", arg(&fixture("pair_singular.json")), "--suite", "q0"]);
    assert_eq!(code, 1);
    assert!(v["results"][0].get("counterexample").is_some());

    // The augmented suite needs valid witnesses.
    assert_eq!(lcpk(&["verify", arg(&fixture("paper_hidden.json")), "--suite", "augmented"]).status.code(), Some(4));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let f = fixture("paper_block_k.json");
    let o = lcpk(&["classify", arg(&f), "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), lcpk(&["classify", arg(&f)]).stdout);
    let bad = dir.path().join("no/such/dir/report.json");
    assert_eq!(lcpk(&["classify", arg(&f), "--out", arg(&bad)]).status.code(), Some(5));
}
