mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::synthetic_frequency_csv;

const QUICK_CONFIG: &str = "
[ga_binary]
population_size = 20
max_generations = 15
stall_generations = 5

[ga_real]
population_size = 20
max_generations = 15
stall_generations = 5
";

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_runs-filter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(p: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(p).unwrap();
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn gen_writes_index_truth_noisy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = cli(&["gen", "--output", path(&out), "--law", "stable", "--seed", "4", "--n", "256"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("index,truth,noisy\n"));
    assert_eq!(rows(&out).len(), 256);
    let again = dir.path().join("h.csv");
    cli(&["gen", "--output", path(&again), "--law", "stable", "--seed", "4", "--n", "256"]);
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn filter_both_writes_equal_budget_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let config = dir.path().join("quick.toml");
    std::fs::write(&input, synthetic_frequency_csv("secular", 3)).unwrap();
    std::fs::write(&config, QUICK_CONFIG).unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = cli(&[
            "filter", "--input", path(&input), "--output", path(&out), "--token", "secular", "--years", "1800:2008",
            "--method", "both", "--config", path(&config), "--seed", "7", "--plot",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let first = run("a.csv");
    let second = run("b.csv");

    let table = rows(&first);
    assert_eq!(table.len(), 209);
    let header = csv::Reader::from_path(&first).unwrap().headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), ["token", "year", "raw", "filtered_baseline", "filtered_runs"]);
    assert_eq!(table[0][1], "1800");
    assert_eq!(table[208][1], "2008");

    let summary = rows(&first.with_extension("summary.csv"));
    assert_eq!(summary.len(), 2);
    assert_eq!(summary[0][2], summary[1][2], "equal k");
    assert!(first.with_extension("svg").exists());

    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    assert_eq!(
        std::fs::read(first.with_extension("summary.csv")).unwrap(),
        std::fs::read(second.with_extension("summary.csv")).unwrap()
    );
}

#[test]
fn constant_series_passes_through_both_filters() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let out = dir.path().join("out.csv");
    let mut text = String::from("token,year,frequency\n");
    for y in 1900..1964 {
        text.push_str(&format!("flat,{y},0.000125\n"));
    }
    std::fs::write(&input, text).unwrap();
    let o = cli(&["filter", "--input", path(&input), "--output", path(&out), "--years", "1900:1963"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for row in rows(&out) {
        for v in &row[3..] {
            let v: f64 = v.parse().unwrap();
            assert!((v - 0.000125).abs() <= 1e-6 * 0.000125);
        }
    }
}

#[test]
fn empty_and_skipped_inputs_succeed_with_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let out = dir.path().join("out.csv");
    std::fs::write(&input, "token,year,frequency\nshort,1900,0.1\n").unwrap();
    let o = cli(&["filter", "--input", path(&input), "--output", path(&out), "--token", "missing"]);
    assert!(o.status.success());
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("missing"), "{stderr}");
    let o = cli(&["filter", "--input", path(&input), "--output", path(&out), "--token", "short", "--years", "1900:1905"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("shorter"));
    assert!(rows(&out).is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");

    assert_eq!(cli(&["filter", "--bogus"]).status.code(), Some(1));
    assert_eq!(cli(&[]).status.code(), Some(1));
    let input = dir.path().join("in.csv");
    std::fs::write(&input, "token,year,frequency\n").unwrap();
    assert_eq!(
        cli(&["filter", "--input", path(&input), "--output", path(&out), "--years", "2000:1900"]).status.code(),
        Some(1)
    );
    assert_eq!(
        cli(&["filter", "--input", path(&input), "--output", path(&out), "--method", "all"]).status.code(),
        Some(1)
    );
    let bad_config = dir.path().join("bad.toml");
    std::fs::write(&bad_config, "no_such_key = 1\n").unwrap();
    assert_eq!(
        cli(&["filter", "--input", path(&input), "--output", path(&out), "--config", path(&bad_config)]).status.code(),
        Some(1)
    );

    let missing = dir.path().join("nope.csv");
    assert_eq!(cli(&["filter", "--input", path(&missing), "--output", path(&out)]).status.code(), Some(2));
    std::fs::write(&input, "token,year,match_count,total_count\nw,1900,1,0\n").unwrap();
    let o = cli(&["filter", "--input", path(&input), "--output", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // A one-point sweep cannot show a rising ratio.
    let config = dir.path().join("quick.toml");
    std::fs::write(&config, QUICK_CONFIG).unwrap();
    let o = cli(&["bench", "sweep", "--trials", "1", "--sigmas", "1", "--config", path(&config), "--check"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cli(&["bench", "sweep", "--trials", "1", "--sigmas", "1", "--config", path(&config)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bench_table1_writes_summary_and_trials() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("quick.toml");
    std::fs::write(&config, QUICK_CONFIG).unwrap();
    let out = dir.path().join("table1.csv");
    let o = cli(&["bench", "table1", "--trials", "1", "--seed", "3", "--config", path(&config), "--output", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    for law in ["normal", "poisson", "stable"] {
        assert!(stdout.contains(law), "{stdout}");
    }
    assert_eq!(rows(&out).len(), 3);
    assert_eq!(rows(&out.with_extension("trials.csv")).len(), 3);
}
