use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn sgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgs")).args(args).env_remove("SUBSAMPLE_SEED").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = sgs(args);
    assert!(out.status.success(), "sgs {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A planted-matching stream with churn, written to `dir/stream.txt`.
fn stream(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("stream.txt");
    ok(&["gen", "--n", "120", "--planted", "3", "--churn", "0.3", "--gen-seed", "7", "--out", p(&path)]);
    path
}

#[test]
fn gen_reports_counts_and_promise() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.txt");
    let v = json(&ok(&["gen", "--n", "120", "--planted", "3", "--churn", "0.5", "--out", p(&path)]));
    let (ins, del) = (v["inserts"].as_u64().unwrap(), v["deletes"].as_u64().unwrap());
    assert_eq!(del, ins / 2);
    assert_eq!(v["promise"][1], 3);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p 120 2 0"));
    assert_eq!(text.lines().filter(|l| l.starts_with('-')).count() as u64, del);
}

#[test]
fn sketch_then_query_equals_direct_query() {
    let dir = TempDir::new().unwrap();
    let s = stream(&dir);
    let sk = dir.path().join("s.sk");
    ok(&["sketch", p(&s), "--k", "3", "--seed", "11", "--out", p(&sk)]);
    let from_sketch = json(&ok(&["query", p(&sk)]));
    let direct = json(&ok(&["query", p(&s), "--k", "3", "--seed", "11"]));
    assert_eq!(from_sketch, direct);
    let oracle = json(&ok(&["oracle", p(&s), "--k", "3"]));
    assert_eq!(direct["value"], oracle["value"]);
    assert_eq!(direct["vertex_cover"]["size"], oracle["vertex_cover"]["size"]);
}

#[test]
fn shard_merge_is_bit_exact() {
    let dir = TempDir::new().unwrap();
    let s = stream(&dir);
    let text = fs::read_to_string(&s).unwrap();
    let lines: Vec<&str> = text.lines().skip(1).collect();
    let (a, b) = lines.split_at(lines.len() / 2);
    let shard = |name: &str, part: &[&str]| {
        let path = dir.path().join(name);
        fs::write(&path, part.join("\n") + "\n").unwrap();
        path
    };
    let (sa, sb) = (shard("a.txt", a), shard("b.txt", b));
    let common = ["--mode", "weighted-matching", "--k", "3", "--seed", "5", "--n", "120"];
    let build = |input: &Path, out: &str| {
        let path = dir.path().join(out);
        let mut args = vec!["sketch", p(input)];
        args.extend(common);
        args.extend(["--out", p(&path)]);
        ok(&args);
        path
    };
    let (ka, kb, full) = (build(&sa, "a.sk"), build(&sb, "b.sk"), build(&s, "full.sk"));
    let merged = dir.path().join("merged.sk");
    ok(&["merge", p(&ka), p(&kb), "--out", p(&merged)]);
    assert_eq!(fs::read(&merged).unwrap(), fs::read(&full).unwrap());
    assert_eq!(ok(&["query", p(&merged)]), ok(&["query", p(&full)]));
}

#[test]
fn merge_rejects_different_seeds() {
    let dir = TempDir::new().unwrap();
    let s = stream(&dir);
    let (a, b) = (dir.path().join("a.sk"), dir.path().join("b.sk"));
    ok(&["sketch", p(&s), "--seed", "1", "--out", p(&a)]);
    ok(&["sketch", p(&s), "--seed", "2", "--out", p(&b)]);
    let out = sgs(&["merge", p(&a), p(&b), "--out", p(&dir.path().join("m.sk"))]);
    assert!(!out.status.success());
}

#[test]
fn compare_emits_success_rates() {
    let text = ok(&["compare", "--mode", "exact-matching", "--k", "4", "--trials", "10", "--n", "100", "--json"]);
    let v = json(&text);
    assert_eq!(v["trials"], 10);
    let rows = v["rows"].as_array().unwrap();
    let all = rows.iter().find(|r| r["check"] == "all").unwrap();
    assert_eq!(all["rate"], 1.0);
    let plain = ok(&["compare", "--mode", "exact-matching", "--k", "4", "--trials", "3", "--n", "100"]);
    assert!(plain.lines().any(|l| l.starts_with("all")), "{plain}");
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let s = stream(&dir);
    let with_env = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_sgs"))
            .args(["query", p(&s), "--mode", "large-matching", "--k", "2"])
            .env("SUBSAMPLE_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success());
        json(&String::from_utf8(out.stdout).unwrap())
    };
    assert_eq!(with_env("9")["params"]["seed"], 9);
    assert_eq!(with_env("9"), json(&ok(&["query", p(&s), "--mode", "large-matching", "--k", "2", "--seed", "9"])));
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "+ 1 2\n* 3 4\n").unwrap();
    let out = sgs(&["query", p(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let deleted = dir.path().join("absent.txt");
    fs::write(&deleted, "- 1 2\n").unwrap();
    assert!(!sgs(&["oracle", p(&deleted)]).status.success());

    let junk = dir.path().join("junk.sk");
    fs::write(&junk, b"SGSW\x01\x00garbage").unwrap();
    assert!(!sgs(&["query", p(&junk)]).status.success());

    assert!(!sgs(&["query", p(&dir.path().join("missing.txt"))]).status.success());
    assert!(!sgs(&["query", p(&bad), "--mode", "nonsense"]).status.success());
}
