use std::path::PathBuf;
use std::process::{Command, Output};

use nonlocal_lab::harness::{
    emit_table, run_experiment, Cell, CorrelationSpec, Experiment, ExperimentConfig, Format, ResultTable,
};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonlocal-lab")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn perfect_resources_always_succeed() {
    let mut cfg = ExperimentConfig::new(Experiment::ProtocolSweep);
    cfg.c = Some(CorrelationSpec::Direct(1.0));
    cfg.n_max = 4;
    let t = run_experiment(&cfg).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert!(t.floats("success_rate").iter().all(|&r| r == 1.0));
}

#[test]
fn boundary_fisher_curve_is_flat() {
    let mut cfg = ExperimentConfig::new(Experiment::FisherCurve);
    cfg.c = Some(CorrelationSpec::Squared(0.5));
    cfg.n_max = 20;
    cfg.trials = 10;
    let t = run_experiment(&cfg).unwrap();
    assert_eq!(
        t.header,
        ["n", "c", "c_prime", "theta", "fisher_closed", "fisher_empirical", "regime", "trials", "seed"]
    );
    let f = t.floats("fisher_closed");
    assert_eq!(f.len(), 20);
    assert!(f.iter().all(|v| (v - 1.0).abs() <= 1e-9));
    // Below the run minimum no empirical estimate is attempted.
    assert!(t.floats("fisher_empirical").iter().all(|v| v.is_nan()));
}

#[test]
fn fisher_curve_estimates_when_affordable() {
    let mut cfg = ExperimentConfig::new(Experiment::FisherCurve);
    cfg.c = Some(CorrelationSpec::Direct(0.9));
    cfg.theta = 0.1;
    cfg.n_max = 3;
    cfg.trials = 20_000;
    let t = run_experiment(&cfg).unwrap();
    for (e, c) in t.floats("fisher_empirical").iter().zip(t.floats("fisher_closed")) {
        assert!((e - c).abs() / c <= 0.05, "{e} vs {c}");
    }
}

#[test]
fn regimes_table_covers_grid() {
    let mut cfg = ExperimentConfig::new(Experiment::Regimes);
    cfg.n_max = 3;
    let t = run_experiment(&cfg).unwrap();
    assert_eq!(t.rows.len(), 22 * 3);
    let k = t.column("regime").unwrap();
    let labels: Vec<&Cell> = t.rows.iter().map(|r| &r[k]).collect();
    assert!(labels.contains(&&Cell::Text("randomness".into())));
    assert!(labels.contains(&&Cell::Text("signaling".into())));
    assert!(labels.contains(&&Cell::Text("no-signaling".into())));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["disconnect", "--c", "0.9", "--c-prime", "0.95", "--n-max", "10", "--trials", "3000", "--seed", "17"];
    let a = cli(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_nonlocal-lab"))
        .args(args)
        .env("NONLOCAL_LAB_THREADS", "3")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);

    let out = scratch("rerun.csv");
    let out_arg = out.to_str().unwrap();
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", out_arg]);
    let c = cli(&with_out);
    assert!(c.status.success());
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn json_round_trips() {
    let mut cfg = ExperimentConfig::new(Experiment::ChshVerify);
    cfg.trials = 4000;
    cfg.format = Format::Json;
    let t = run_experiment(&cfg).unwrap();
    let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    let header: Vec<&str> = v["header"].as_array().unwrap().iter().map(|h| h.as_str().unwrap()).collect();
    assert_eq!(header, t.header);
    for (k, (key, value)) in t.metadata.iter().enumerate() {
        assert_eq!(v["metadata"][key], *value, "metadata entry {k}");
    }
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), t.rows.len());
    for (row, json) in t.rows.iter().zip(rows) {
        for (cell, j) in row.iter().zip(json.as_array().unwrap()) {
            match cell {
                Cell::Float(x) if x.is_finite() => assert_eq!(j.as_f64().unwrap().to_bits(), x.to_bits()),
                Cell::Float(_) => assert!(j.is_null()),
                Cell::Int(x) => assert_eq!(j.as_i64().unwrap(), *x),
                Cell::Bool(x) => assert_eq!(j.as_bool().unwrap(), *x),
                Cell::Text(x) => assert_eq!(j.as_str().unwrap(), x),
            }
        }
    }
}

#[test]
fn csv_floats_round_trip() {
    let mut cfg = ExperimentConfig::new(Experiment::Regimes);
    cfg.theta = 0.37;
    cfg.n_max = 5;
    let t = run_experiment(&cfg).unwrap();
    let csv = t.to_csv();
    let k = t.column("fisher_closed").unwrap();
    let parsed: Vec<f64> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(k).unwrap().parse().unwrap())
        .collect();
    assert_eq!(parsed, t.floats("fisher_closed"));
}

#[test]
fn empty_table_writes_header_only() {
    let t = ResultTable::new(&["n", "value"], Vec::new());
    let path = scratch("empty.csv");
    emit_table(&t, Format::Csv, Some(&path)).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,value\n");
    let json = scratch("empty.json");
    emit_table(&t, Format::Json, Some(&json)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["regimes", "--n-max", "2"]).status.code(), Some(0));
    // Usage errors.
    assert_eq!(cli(&["protocol-sweep"]).status.code(), Some(2));
    assert_eq!(cli(&["protocol-sweep", "--c", "1.5"]).status.code(), Some(2));
    assert_eq!(cli(&["regimes", "--n-min", "4", "--n-max", "2"]).status.code(), Some(2));
    assert_eq!(cli(&["no-such-experiment"]).status.code(), Some(2));
    assert_eq!(cli(&["clt", "--c", "0.5", "--c2", "0.25"]).status.code(), Some(2));
    // Runtime errors: too few trials, unwritable output.
    assert_eq!(cli(&["clt", "--c", "0.9", "--n-max", "2", "--trials", "10"]).status.code(), Some(1));
    let bad = scratch("missing-dir/out.csv");
    assert_eq!(cli(&["regimes", "--n-max", "2", "--out", bad.to_str().unwrap()]).status.code(), Some(1));
}

/// Rebuilds the argument list from the `# key=value` lines of a CSV file.
fn args_from_metadata(csv: &str) -> Vec<String> {
    let mut args = Vec::new();
    for line in csv.lines().filter_map(|l| l.strip_prefix("# ")) {
        let (key, value) = line.split_once('=').unwrap();
        match key {
            "experiment" => args.insert(0, value.to_string()),
            "version" | "streams" => {}
            _ => args.extend([format!("--{}", key.replace('_', "-")), value.to_string()]),
        }
    }
    args
}

#[test]
fn metadata_reconstructs_the_run() {
    let first = cli(&[
        "protocol-sweep", "--c2", "0.6", "--c-prime", "-0.9", "--theta", "-0.25", "--n-min", "2", "--n-max", "9",
        "--trials", "500", "--seed", "123456789", "--engine", "path",
    ]);
    assert!(first.status.success());
    let text = String::from_utf8(first.stdout).unwrap();
    let args = args_from_metadata(&text);
    let again = cli(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(again.status.success(), "{args:?}");
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);

    let mut cfg = ExperimentConfig::new(Experiment::Clt);
    cfg.c = Some(CorrelationSpec::Direct(-0.3));
    cfg.seed = u64::MAX;
    let echoed: Vec<String> = cfg.echo().into_iter().filter(|(k, _)| k != "version").flat_map(|(k, v)| {
        if k == "experiment" { vec![v] } else { vec![format!("--{}", k.replace('_', "-")), v] }
    }).collect();
    assert_eq!(echoed, cfg.to_args());
}

#[test]
fn transcripts_flatten() {
    use nonlocal_lab::channel::BernoulliSource;
    use nonlocal_lab::harness::transcript_table;
    use nonlocal_lab::vandam::{run_protocol, AddressMode, Engine, VanDamConfig};

    let cfg = VanDamConfig::new(2, 1.0, 1.0).unwrap();
    let src = BernoulliSource::new(0.0).unwrap();
    let t = run_protocol(cfg, &src, AddressMode::All, Engine::FullTree, &mut nonlocal_lab::rng::stream(1, 2, 3)).unwrap();
    let table = transcript_table(&t, Vec::new());
    assert_eq!(table.header, ["n", "c", "c_prime", "address", "x_bits", "x_target", "wire_bit", "received_bit", "decoded"]);
    assert_eq!(table.rows.len(), 4);
    for row in &table.rows {
        let Cell::Text(bits) = &row[4] else { panic!("x_bits is text") };
        assert_eq!(bits.len(), 4);
        assert_eq!(row[5], row[8]);
    }
}
