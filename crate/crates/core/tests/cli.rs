use std::path::Path;
use std::process::{Command, Output};

fn secgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secgraph"))
        .args(args)
        .env_remove("SECGRAPH_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit status")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&secgraph(&["nonsense"])), 1);
    assert_eq!(code(&secgraph(&["degree", "--lambda-e", "-0.5"])), 1);
    assert_eq!(code(&secgraph(&["degree", "--config", "/no/such/run.toml"])), 1);
    assert_eq!(code(&secgraph(&["collude", "--b", "0.9", "--trials", "10"])), 1);
    assert_eq!(code(&secgraph(&["--help"])), 0);
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "lambda_l = 1.0\nlamda_e = 0.1\n").unwrap();
    let out = secgraph(&["degree", "--config", path_str(&cfg)]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lamda_e"), "stderr: {err}");
}

#[test]
fn csv_output_echoes_config_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("degree.csv");
    let out = secgraph(&["degree", "--trials", "2000", "--seed", "77", "--out", path_str(&out_path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let echo: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(echo.iter().any(|l| l.contains("seed") && l.contains("77")), "{text}");
    assert!(echo.iter().any(|l| l.contains("lambda_e")));
    let body: Vec<&str> = text.lines().skip(echo.len()).collect();
    let width = body[0].split(',').count();
    assert!(body.len() > 2 && body.iter().all(|l| l.split(',').count() == width));
}

#[test]
fn json_output_has_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("threshold.json");
    let out = secgraph(&[
        "threshold", "--trials", "2000", "--grid", "0,0.5", "--format", "json", "--out", path_str(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    for key in ["analytic", "simulated", "se", "tolerance", "pass"] {
        assert!(!v["summary"][key].is_null(), "summary missing {key}");
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("env.json");
    let out = Command::new(env!("CARGO_BIN_EXE_secgraph"))
        .args(["sectors", "--trials", "500", "--format", "json", "--out", path_str(&out_path)])
        .env("SECGRAPH_SEED", "4242")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 4242);
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["degree", "--trials", "3000", "--seed", "5"],
        &["msr", "--trials", "3000", "--neighbor", "2", "--grid", "0,1,2,4"],
        &["collude", "--trials", "2000", "--b", "2"],
        &["voronoi", "--trials", "1000", "--format", "json"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let files: Vec<Vec<u8>> = ["1", "4"]
            .iter()
            .map(|threads| {
                let path = dir.path().join(format!("case{k}-{threads}"));
                let mut full = args.to_vec();
                full.extend(["--threads", threads, "--out", path_str(&path)]);
                let out = secgraph(&full);
                assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
                std::fs::read(&path).unwrap()
            })
            .collect();
        assert_eq!(files[0], files[1], "{args:?} differs between thread counts");
    }
}
