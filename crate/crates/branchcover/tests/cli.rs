use std::path::PathBuf;
use std::process::{Command, Output};

use branchcover::experiment::{export_report, run_experiment, tail_distribution, ExperimentConfig, StatReport};
use branchcover::oracle::{exhaustive_oracle, DEFAULT_BUDGET};
use branchcover_core::{Presentation, Rational};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branchcover")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn example() -> Presentation {
    Presentation::parse("gens: a b\nrel: a^-1 b^2 a b^-1").unwrap()
}

#[test]
fn validate_rejects_a_proper_power() {
    let pp = fixture("projective_plane.txt");
    let o = run(&["validate", "-p", pp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"acceptable\": false"));
    let ok = run(&["validate", "-p", fixture("one_relator.txt").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn cover_with_simplified_pi1() {
    let p = fixture("one_relator.txt");
    let o = run(&["cover", "-p", p.to_str().unwrap(), "--sigma", "(123);(12)", "--tree", "a_1,a_2", "--pi1", "--simplify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["disks"].as_array().unwrap().len(), 2);
    assert_eq!(v["disks"][1]["boundary"], "a_2^-1 b_2 b_1 a_2 b_3^-1");
    assert_eq!(v["pi1"]["presentation"]["generators"], serde_json::json!(["a_3", "b_1", "b_2", "b_3"]));
    assert_eq!(v["pi1"]["simplified"]["generators"], serde_json::json!(["a_3", "b_1", "b_2"]));
    assert_eq!(v["pi1"]["simplified"]["abelian"]["torsion"], serde_json::json!([2]));

    let text = run(&["pi1", "-p", p.to_str().unwrap(), "--sigma", "(123);(12)", "--tree", "a_1,a_2", "--simplify", "--format", "text"]);
    assert!(stdout(&text).contains("rel: a_3^-1 b_2 b_1 b_2 b_1 a_3 b_2^-1 b_1 b_2 b_1^-1"));
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    let p = fixture("one_relator.txt");
    let p = p.to_str().unwrap();
    assert_eq!(run(&["analyze", "-p", p, "--lambda", "3/2"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "-p", p, "--lambda", "0"]).status.code(), Some(2));
    assert_eq!(run(&["cover", "-p", p, "--sigma", "(12)(13)"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn experiment_output_ignores_worker_count() {
    let p = fixture("one_relator.txt");
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for jobs in ["1", "3"] {
        let out = dir.path().join(format!("run{jobs}.csv"));
        let o = run(&[
            "experiment", "-p", p.to_str().unwrap(), "--lambda", "1/6", "--degrees", "20,60", "--samples", "200",
            "--seed", "3", "--jobs", jobs, "--format", "csv", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        bodies.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    assert!(bodies[0].starts_with("n,statistic,value,stderr,samples\n"));

    let json = run(&[
        "experiment", "-p", p.to_str().unwrap(), "--lambda", "1/6", "--degrees", "20", "--samples", "50",
        "--seed", "3", "--deterministic", "--format", "json",
    ]);
    let report: StatReport = serde_json::from_slice(&json.stdout).unwrap();
    assert!(report.runtime.is_none());
    assert_eq!(report.degrees[0].samples, 50);
}

#[test]
fn report_round_trips_and_csv_shape() {
    let mut cfg = ExperimentConfig::new(example(), Rational::new(1, 6), vec![10, 40], 100, 9);
    cfg.k_max = Some(4);
    let report = run_experiment(&cfg, Some(2)).unwrap();
    let back: StatReport = serde_json::from_str(&export_report(&report, "json").unwrap()).unwrap();
    assert_eq!(back, report);

    // 4 cycle means + 4 L_n + transitive + 5 outcome rates per degree
    let csv = export_report(&report, "csv").unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 14);
    assert!(export_report(&report, "xml").is_err());

    assert!(run_experiment(&ExperimentConfig::new(example(), Rational::new(1, 6), vec![], 10, 9), None).is_err());
    let empty = StatReport { degrees: vec![], ..report };
    assert_eq!(export_report(&empty, "csv").unwrap(), "n,statistic,value,stderr,samples\n");
}

#[test]
fn tail_distribution_bounds() {
    let mut cfg = ExperimentConfig::new(example(), Rational::new(1, 6), vec![30], 200, 1);
    cfg.outcomes = false;
    let report = run_experiment(&cfg, None).unwrap();
    let none = tail_distribution(&report, 30, 3, -1).unwrap();
    assert_eq!(none.p, 0.0);
    assert_eq!(none.lower, 0.0);
    let all = tail_distribution(&report, 30, 3, 1_000).unwrap();
    assert_eq!(all.p, 1.0);
    assert_eq!(all.upper, 1.0);
    let mid = tail_distribution(&report, 30, 3, 2).unwrap();
    assert!(mid.lower <= mid.p && mid.p <= mid.upper);
    assert!(tail_distribution(&report, 31, 3, 2).is_err());
}

#[test]
fn oracle_at_degree_two() {
    let s = exhaustive_oracle(&example(), 2, Rational::new(1, 6), Some(2), DEFAULT_BUDGET).unwrap();
    assert_eq!(s.tuples, 4);
    assert_eq!(s.transitive, Rational::new(3, 4));
    // b^2 = 1 in Sym(2), so r(σ) = σ_b^-1: two fixed points or one 2-cycle
    assert_eq!(s.cycle_means[0], [Rational::from_integer(1), Rational::new(1, 2)]);

    let p = fixture("one_relator.txt");
    let o = run(&["oracle", "-p", p.to_str().unwrap(), "--n", "2", "--lambda", "1/6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["transitive"], "3/4");
}
