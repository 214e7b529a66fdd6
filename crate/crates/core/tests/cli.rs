//! End-to-end runs of the `ffhyper` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ffhyper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffhyper")).args(args).env_remove("FFHYPER_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(ffhyper(&["verify", "--suite", "reduction_cov1", "--q", "3", "--samples", "5"]).status.code(), Some(0));
    assert_eq!(
        ffhyper(&["verify", "--suite", "equal_reduction", "--q", "3", "--exhaustive", "--form", "printed"]).status.code(),
        Some(1)
    );
    assert_eq!(ffhyper(&["verify", "--q", "6"]).status.code(), Some(2));
    assert_eq!(ffhyper(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(ffhyper(&["verify", "--exhaustive", "--samples", "4"]).status.code(), Some(2));
    assert_eq!(ffhyper(&["eval", "--A", "chi3", "--B", "chi0", "--C", "chi0", "--x", "1", "--q", "5"]).status.code(), Some(0));
    assert_eq!(ffhyper(&["eval", "--A", "chi9", "--B", "chi0", "--C", "chi0", "--x", "1", "--q", "5"]).status.code(), Some(2));
    assert_eq!(ffhyper(&["eval", "--A", "chi1", "--B", "chi0,chi1", "--C", "chi0", "--x", "1", "--q", "5"]).status.code(), Some(2));
    let cap = ffhyper(&["verify", "--q", "5", "--exhaustive", "--budget", "100"]);
    assert_eq!(cap.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&cap.stderr).contains("budget"));
}

#[test]
fn eval_reports_every_route() {
    let out = ffhyper(&[
        "--format", "json", "eval", "--q", "7", "--A", "chi1", "--B", "chi2,chi0", "--C", "chi3,chi5", "--x", "2,3", "--route", "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["agree"], true);
    let routes: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["route"].as_str().unwrap()).collect();
    assert_eq!(routes, ["direct", "charsum"]);
    assert_eq!(v["results"][0]["value"], v["results"][1]["value"]);

    // the two-variable series against its unnormalized point sum
    let f2 = ffhyper(&["--format", "json", "eval", "--series", "f2-point", "--q", "5", "--A", "chi1", "--B", "chi2,chi3", "--C", "chi1,chi1", "--x", "2,3"]);
    assert_eq!(f2.status.code(), Some(0), "{}", String::from_utf8_lossy(&f2.stderr));
}

#[test]
fn verify_emits_versioned_json_lines() {
    let out = ffhyper(&["verify", "--suite", "genfunc", "--q", "5", "--n", "2", "--samples", "4", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 3 * 4 + 1);
    for l in &lines[..12] {
        assert_eq!(l["schema"], 1);
        assert_eq!(l["kind"], "check");
        assert_eq!(l["equal"], true);
        assert!(l.get("elapsed_us").is_none());
    }
    let summary = &lines[12];
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["ok"], true);
    assert_eq!(summary["checked"], 12);
    assert_eq!(summary["cells"].as_array().unwrap().len(), 3);

    let timed = ffhyper(&["verify", "--suite", "reduction_split", "--q", "5", "--samples", "2", "--timings"]);
    assert!(json_lines(&timed)[0]["elapsed_us"].is_u64());
}

#[test]
fn verify_failure_carries_a_counterexample() {
    let out = ffhyper(&["verify", "--suite", "eps_reduction", "--q", "3", "--exhaustive", "--form", "printed", "--fail-fast"]);
    assert_eq!(out.status.code(), Some(1));
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["ok"], false);
    assert_eq!(summary["failed"], 1);
    let ce = &summary["cells"][0]["first_counterexample"];
    assert_eq!(ce["equal"], false);
    assert_ne!(ce["lhs"], ce["rhs"]);

    let human = ffhyper(&["--format", "human", "verify", "--suite", "eps_reduction", "--q", "3", "--exhaustive", "--form", "printed"]);
    let text = stdout(&human);
    assert!(text.lines().any(|l| l.starts_with("FAIL eps_reduction q=3") && l.contains(" k=")));
    assert!(!text.contains("Some("));
}

#[test]
fn field_cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = || {
        let o = ffhyper(&["--format", "json", "field", "--p", "3", "--r", "3", "--cache-dir", d]);
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_str::<Value>(stdout(&o).trim()).unwrap()
    };
    let first = run();
    assert_eq!(first["status"], "created");
    assert_eq!(first["q"], 27);
    let second = run();
    assert_eq!(second["status"], "unchanged");
    assert_eq!(first["checksum"], second["checksum"]);

    let path = Path::new(first["path"].as_str().unwrap());
    let mut bytes = std::fs::read(path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0xff;
    std::fs::write(path, &bytes).unwrap();
    let third = run();
    assert_eq!(third["status"], "rebuilt");
    assert_eq!(third["checksum"], first["checksum"]);

    // environment variable in place of the flag
    let env_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ffhyper"))
        .args(["field", "--q", "9"])
        .env("FFHYPER_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
}

#[test]
fn export_tables() {
    let out = ffhyper(&["--format", "csv", "export", "binom", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,col,value,re,im"));
    assert_eq!(lines.count(), 16);

    let out = ffhyper(&["export", "field", "--q", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["q"], 9);
}

#[test]
fn bench_prints_both_routes() {
    let out = ffhyper(&["--format", "csv", "bench", "--q", "5", "--n", "2", "--count", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "route,q,n,instances,seconds,per_instance_us,agree");
    assert!(lines.iter().any(|l| l.starts_with("direct,5,2,10,")));
    assert!(lines.iter().any(|l| l.starts_with("charsum,5,2,10,")));
    assert_eq!(ffhyper(&["bench", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn dumped_config_reproduces_the_run() {
    let args = ["verify", "--suite", "reduction", "--q", "5", "--n", "3", "--samples", "6", "--seed", "11"];
    let direct = ffhyper(&args);
    let dumped = ffhyper(&[&["--dump-config"], &args[..]].concat());
    assert_eq!(dumped.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.toml");
    std::fs::write(&file, &dumped.stdout).unwrap();
    let replay = ffhyper(&["run", file.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(direct.stdout, replay.stdout);

    std::fs::write(&file, "this is = not [valid").unwrap();
    assert_eq!(ffhyper(&["run", file.to_str().unwrap()]).status.code(), Some(2));
}
