use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn trigroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigroots"))
        .args(args)
        .env_remove("TRIGROOTS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn count_sinusoid_has_two_roots() {
    let args = ["count", "--family", "gaussian", "--n", "1", "--u", "0", "--seed", "7", "--a", "0", "--b", "6.283185307179586"];
    let out = trigroots(&args);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("half_units = 4\nroots = 2.0\n"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("runtime"));
    // the report body is identical across runs; runtime goes to stderr
    assert_eq!(trigroots(&args).stdout, out.stdout);
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["count", "--a", "3", "--b", "1"], 2),
        (&["count", "--n", "0"], 2),
        (&["count", "--oversample", "2"], 2),
        (&["count", "--nope"], 2),
        (&["count", "--n", "ten"], 2),
        (&["count", "--family", "cauchy"], 2),
        (&[], 2),
        (&["converge", "--trials", "0"], 2),
        (&["converge", "--n-values", "40,20"], 2),
        (&["converge", "--b", "7"], 2),
        (&["gap", "--delta-list", "0.6"], 2),
        (&["events", "--m", "0"], 2),
        (&["smallball", "--t-list", "-1"], 2),
        (&["chf", "--delta", "0"], 2),
        (&["gaussian", "--rho-list", "1.0"], 2),
        (&["gaussian", "--delta-list", "-0.1"], 2),
        (&["count", "--n", "3", "--u", "-0.5", "--a", "-1", "--b", "8"], 0),
        (&["gaussian"], 0),
    ];
    for (args, expected) in cases {
        let out = trigroots(args);
        assert_eq!(code(&out), *expected, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn every_subcommand_runs_small() {
    let cases: &[&[&str]] = &[
        &["converge", "--trials", "20", "--n-values", "10,20"],
        &["gap", "--trials", "20", "--n", "30", "--delta-list", "0.1,0.3"],
        &["events", "--trials", "200", "--n", "30"],
        &["smallball", "--trials", "200", "--n", "30", "--j", "1"],
        &["chf", "--trials", "200", "--n", "30"],
        &["gaussian", "--u", "1", "--delta-list", "0.01,0.1", "--rho-list", "0.5,0.999"],
    ];
    for args in cases {
        let out = trigroots(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout(&out).starts_with("# resolved configuration\n["), "{args:?}");
    }
}

#[test]
fn converge_single_trial_marks_stderr_na() {
    let out = trigroots(&["converge", "--trials", "1", "--n-values", "10,20"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let header = text.lines().find(|l| l.starts_with("n,")).unwrap();
    let stderr_col = header.split(',').position(|c| c == "stderr").unwrap();
    let rows: Vec<_> = text.lines().filter(|l| l.starts_with("10,") || l.starts_with("20,")).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row.split(',').nth(stderr_col), Some("NA"), "{row}");
    }
    assert!(text.contains("final n = 20: mean_roots_per_n = "));
}

#[test]
fn gaussian_table_values() {
    let out = trigroots(&["gaussian", "--u", "0", "--delta-list", "0.01", "--rho-list", "0"]);
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    let crossing = lines.iter().position(|l| l.starts_with("delta,")).unwrap();
    let ratio: f64 = lines[crossing + 1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() <= 0.005, "{ratio}");
    let orthant = lines.iter().position(|l| l.starts_with("rho,")).unwrap();
    let cells: Vec<_> = lines[orthant + 1].split(',').collect();
    assert_eq!(cells[1], "0.25");

    let out = trigroots(&["gaussian", "--u", "1", "--delta-list", "0.1", "--rho-list", "0.999"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let row = text.lines().skip_while(|l| !l.starts_with("rho,")).nth(1).unwrap();
    let ratio: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() <= 0.02, "{ratio}");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[count]\nn = 1\nseed = 7\nfamily = \"uniform\"\n\n[converge]\ntrials = 3\nn_values = [5]\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = trigroots(&["--config", cfg, "count"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("family = \"uniform\"") && text.contains("n = 1\n"), "{text}");

    let out = trigroots(&["count", "--config", cfg, "--n", "4", "--family", "rademacher"]);
    let text = stdout(&out);
    assert!(text.contains("family = \"rademacher\"") && text.contains("n = 4\n") && text.contains("seed = 7\n"), "{text}");

    let out = trigroots(&["--config", cfg, "converge", "--trials", "2"]);
    let text = stdout(&out);
    assert!(text.contains("trials = 2\n") && text.contains("n_values = [5]"), "{text}");

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[count]\nsamples = 3\n").unwrap();
    assert_eq!(code(&trigroots(&["--config", bad.to_str().unwrap(), "count"])), 2);
    fs::write(&bad, "[count\n").unwrap();
    assert_eq!(code(&trigroots(&["--config", bad.to_str().unwrap(), "count"])), 2);
    let missing = dir.path().join("missing.toml");
    assert_eq!(code(&trigroots(&["--config", missing.to_str().unwrap(), "count"])), 1);
}

#[test]
fn output_files_are_byte_identical_across_threads() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, threads: &str| {
        let base = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_trigroots"))
            .args(["converge", "--trials", "40", "--n-values", "15,30", "--family", "rademacher", "--threads", "1"])
            .args(["--output", base.to_str().unwrap()])
            .env("TRIGROOTS_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        (
            fs::read(base.with_extension("csv")).unwrap(),
            fs::read_to_string(base.with_extension("json")).unwrap(),
        )
    };
    let (csv1, json1) = run("a", "1");
    let (csv4, json4) = run("b", "4");
    assert_eq!(csv1, csv4);
    // the echoed thread count and output path differ; everything else must match
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("\"threads\"") && !l.contains("\"output_path\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&json1), strip(&json4));
    let doc: serde_json::Value = serde_json::from_str(&json1).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["threads"], 1);
    assert_eq!(doc["config"]["family"], "rademacher");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);

    let bad = Command::new(env!("CARGO_BIN_EXE_trigroots"))
        .args(["converge", "--trials", "2", "--n-values", "5"])
        .env("TRIGROOTS_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let base = file.join("result");
    let out = trigroots(&["converge", "--trials", "2", "--n-values", "5", "--output", base.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}
