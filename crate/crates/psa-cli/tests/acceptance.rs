//! CLI acceptance: deterministic output, format guarantees, exit codes,
//! and the cache-directory environment variable.

use std::path::PathBuf;
use std::process::{Command, Output};

fn psa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psa"))
        .args(args)
        .env_remove("PSA_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn unique_temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("psa-cli-test-{}-{}", std::process::id(), tag));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn criterion_12_table_runs_are_byte_identical() {
    let args = [
        "table",
        "--function",
        "one",
        "--grid",
        "1e3:1e5:g10",
        "--format",
        "csv",
    ];
    let first = psa(&args);
    let second = psa(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "table output must be deterministic");
    assert!(!first.stdout.is_empty());
    println!("PASS criterion 12: consecutive table runs are byte-identical");
}

#[test]
fn parallel_rows_preserve_output_bytes() {
    let base = ["table", "--function", "log", "--grid", "1e3:1e6:g10"];
    let serial = psa(&base);
    let parallel = psa(&[&base[..], &["--jobs", "4"]].concat());
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn csv_shape_and_float_format() {
    let out = psa(&["table", "--function", "one", "--grid", "1000,10000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(
        lines[0],
        "n,exact,main_crude,bound_crude,main_li,bound_pnt,bound_rh,ratio_exact_over_li,err_li,err_over_bound_pnt,err_over_bound_rh"
    );
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 11);
        // floats carry 12 significant digits in scientific notation
        for field in &fields[1..] {
            let mantissa = field
                .trim_start_matches('-')
                .split('e')
                .next()
                .unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 12, "field `{field}` in `{line}`");
        }
    }
    // exact pi values ride along
    assert!(lines[1].starts_with("1000,1.68000000000e2,"));
    assert!(lines[2].starts_with("10000,1.22900000000e3,"));
}

#[test]
fn json_output_echoes_config() {
    let out = psa(&[
        "table",
        "--function",
        "power",
        "--param",
        "m=1",
        "--grid",
        "1000,10000",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["config"]["command"], "table");
    assert_eq!(doc["config"]["function"], "power");
    assert_eq!(doc["config"]["m"], 1.0);
    assert_eq!(doc["config"]["c"], 1.0);
    assert_eq!(doc["config"]["grid"], serde_json::json!([1000, 10000]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["rows"][0]["n"], 1000);
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    // usage: unknown flag (clap) and bad grid (config validation)
    assert_eq!(psa(&["table", "--nope"]).status.code(), Some(2));
    assert_eq!(
        psa(&["table", "--function", "one", "--grid", "10,5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        psa(&["table", "--function", "power", "--param", "m=-2", "--grid", "1000"])
            .status
            .code(),
        Some(2)
    );
    // hypothesis violation: non-monotone function under the refined models
    assert_eq!(
        psa(&["table", "--function", "log_over_t", "--grid", "1000"]).status.code(),
        Some(3)
    );
    // resource limit: exponential overflow in linear space
    assert_eq!(
        psa(&["table", "--function", "exp2", "--grid", "2000,4000"]).status.code(),
        Some(4)
    );
    // failing checks: the counterexample trips the necessary condition
    assert_eq!(
        psa(&["conditions", "--function", "exp2", "--grid", "1e3:1e6:g10"])
            .status
            .code(),
        Some(1)
    );
    // clean run
    assert_eq!(
        psa(&["conditions", "--function", "recip", "--grid", "1e3:1e6:g10"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn verify_suite_passes_and_reports_cases() {
    let out = psa(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,function,n,relative_error,status\n"));
    let lines: Vec<&str> = text.lines().skip(1).collect();
    // 6 functions x (4 summation + 2 by-parts) cases
    assert_eq!(lines.len(), 36);
    assert!(lines.iter().all(|l| l.ends_with(",pass")));
    assert!(lines.iter().any(|l| l.starts_with("summation-identity,power(m=0.5),")));
}

#[test]
fn table_ratio_column_approaches_one() {
    let out = psa(&[
        "table",
        "--function",
        "one",
        "--grid",
        "1e3:1e6:g10",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let dists: Vec<f64> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["ratio_exact_over_li"].as_f64().unwrap() - 1.0).abs())
        .collect();
    assert_eq!(dists.len(), 4);
    assert!(
        dists.windows(2).all(|w| w[1] < w[0]),
        "ratio should approach 1: {dists:?}"
    );

    // theta(n)/n climbs toward 1 for f = log
    let out = psa(&["table", "--function", "log", "--grid", "1e3:1e6:g10", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let normalized: Vec<f64> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["exact"].as_f64().unwrap() / r["n"].as_f64().unwrap())
        .collect();
    assert!(normalized.windows(2).all(|w| w[1] > w[0]));
    assert!((normalized.last().unwrap() - 1.0).abs() < 0.01);

    // sum 1/p stays within 1 of log log n
    let out = psa(&["table", "--function", "recip", "--grid", "1000000", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let exact = doc["rows"][0]["exact"].as_f64().unwrap();
    assert!((exact - 1e6f64.ln().ln()).abs() < 1.0);
}

#[test]
fn model_constants_are_flag_controlled() {
    let get_bound = |extra: &[&str]| -> f64 {
        let mut args = vec!["table", "--function", "one", "--grid", "10000", "--format", "json"];
        args.extend_from_slice(extra);
        let out = psa(&args);
        assert!(out.status.success());
        let doc: serde_json::Value =
            serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        doc["rows"][0]["bound_pnt"].as_f64().unwrap()
    };
    let default_bound = get_bound(&[]);
    let softer = get_bound(&["--c", "0.5"]);
    let sharper_exponent = get_bound(&["--theta", "0.6"]);
    // bound = n exp(-c (log n)^theta) for f = 1
    let ln_n = 1e4f64.ln();
    assert!((default_bound - 1e4 * (-ln_n.sqrt()).exp()).abs() < 1e-9 * default_bound);
    assert!((softer - 1e4 * (-0.5 * ln_n.sqrt()).exp()).abs() < 1e-9 * softer);
    assert!((sharper_exponent - 1e4 * (-ln_n.powf(0.6)).exp()).abs() < 1e-9 * sharper_exponent);
}

#[test]
fn product_bound_reports_positive_slack() {
    let out = psa(&["product-bound", "--grid", "10:1e5:g10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,theta,bound_crude_log,bound_rh_log,slack_crude,slack_rh");
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let slack_crude: f64 = fields[4].parse().unwrap();
        let slack_rh: f64 = fields[5].parse().unwrap();
        assert!(slack_crude > 0.0 && slack_rh > 0.0, "{line}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = unique_temp_dir("outflag");
    let path = dir.join("table.csv");
    let to_stdout = psa(&["table", "--function", "log", "--grid", "1000,10000"]);
    let to_file = Command::new(env!("CARGO_BIN_EXE_psa"))
        .args([
            "table",
            "--function",
            "log",
            "--grid",
            "1000,10000",
            "--out",
            path.to_str().unwrap(),
        ])
        .env_remove("PSA_CACHE_DIR")
        .output()
        .unwrap();
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cache_dir_is_honored_and_output_unchanged() {
    let dir = unique_temp_dir("cache");
    let args = ["table", "--function", "one", "--grid", "1e3:1e5:g10"];
    let uncached = psa(&args);
    let run = |env_dir: &PathBuf| {
        Command::new(env!("CARGO_BIN_EXE_psa"))
            .args(args)
            .env("PSA_CACHE_DIR", env_dir)
            .output()
            .unwrap()
    };
    let cold = run(&dir);
    let entries: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert!(!entries.is_empty(), "cache directory should gain segment files");
    let warm = run(&dir);
    assert_eq!(uncached.stdout, cold.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}
