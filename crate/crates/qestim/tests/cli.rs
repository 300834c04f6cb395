use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qestim::{parse_instance, HarnessError};
use qestim_core::instances::Instance;
use tempfile::TempDir;

fn qestim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qestim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn loads_schema_examples() {
    match parse_instance(r#"{"kind":"real","ell":2,"values":[0.0,0.5]}"#).unwrap() {
        Instance::Real(oracle) => {
            assert_eq!(oracle.len(), 2);
            assert_eq!(oracle.ell(), Some(2));
            assert_eq!(oracle.counter().tally(), 0);
        }
        other => panic!("unexpected {other:?}"),
    }
    match parse_instance(r#"{"kind":"distance","n":2,"rows":[[0,1],[1,0]]}"#).unwrap() {
        Instance::Distance(dist) => {
            assert_eq!(dist.len(), 2);
            assert_eq!(dist.entry(0, 1), 1.0);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn out_of_range_value_names_the_field() {
    let err = parse_instance(r#"{"kind":"real","values":[0.0,1.5]}"#).unwrap_err();
    assert!(err.is_validation());
    assert!(err.to_string().contains("values[1]"), "{err}");

    let err = parse_instance(r#"{"kind":"real","values":[0.0,0.5,0.25]}"#).unwrap_err();
    assert!(err.to_string().contains("values"), "{err}");

    let err = parse_instance(r#"{"kind":"real","ell":1,"values":[0.0,0.25]}"#).unwrap_err();
    assert!(err.to_string().contains("values[1]"), "{err}");

    let err = parse_instance(r#"{"kind":"real","ell":2}"#).unwrap_err();
    assert!(matches!(err, HarnessError::Json(_)));
    assert!(err.to_string().contains("values"), "{err}");
}

#[test]
fn gen_then_run_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("f.json");
    let out = qestim(&[
        "gen",
        "--kind",
        "uniform-random",
        "--n",
        "64",
        "--seed",
        "3",
        "--out",
        path_str(&inst),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let csv = dir.path().join(name);
        let out = qestim(&[
            "run",
            "mean1",
            "--oracle",
            path_str(&inst),
            "--t",
            "15,63,255",
            "--trials",
            "200",
            "--seed",
            "11",
            "--out",
            path_str(&csv),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,algorithm,t,M,ell,n,estimate,truth,abs_error,bound,within_bound,queries,seed"
    );
    assert_eq!(lines.count(), 600);

    // a different seed changes the output
    let csv = dir.path().join("c.csv");
    qestim(&[
        "run",
        "mean1",
        "--oracle",
        path_str(&inst),
        "--t",
        "15,63,255",
        "--trials",
        "200",
        "--seed",
        "12",
        "--out",
        path_str(&csv),
    ]);
    assert_ne!(fs::read(&csv).unwrap(), text.as_bytes());

    let out = qestim(&[
        "summarize",
        "--in",
        path_str(&dir.path().join("a.csv")),
        "--check",
        "slope",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("slope"));
}

#[test]
fn zero_trials_gives_empty_output() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("f.json");
    fs::write(
        &inst,
        r#"{"kind":"real","ell":2,"values":[0.0,0.5,0.25,0.75]}"#,
    )
    .unwrap();

    let csv = dir.path().join("r.csv");
    let out = qestim(&[
        "run",
        "mean2",
        "--oracle",
        path_str(&inst),
        "--trials",
        "0",
        "--seed",
        "1",
        "--out",
        path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1);

    let json = dir.path().join("r.json");
    let out = qestim(&[
        "run",
        "mean2",
        "--oracle",
        path_str(&inst),
        "--trials",
        "0",
        "--seed",
        "1",
        "--format",
        "json",
        "--out",
        path_str(&json),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&json).unwrap().trim(), "[]");
}

#[test]
fn validation_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"kind":"real","values":[0.0,1.5]}"#).unwrap();
    let out = qestim(&[
        "run",
        "mean1",
        "--oracle",
        path_str(&bad),
        "--t",
        "7",
        "--trials",
        "1",
        "--seed",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("values[1]"));

    let out = qestim(&[
        "gen",
        "--kind",
        "constant",
        "--n",
        "3",
        "--value",
        "0.5",
        "--out",
        path_str(&dir.path().join("x.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`n`"));

    let out = qestim(&[
        "gen",
        "--kind",
        "constant",
        "--n",
        "4",
        "--out",
        path_str(&dir.path().join("x.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`value`"));
}

#[test]
fn gen_writes_documented_instances() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let out = qestim(&[
        "gen",
        "--kind",
        "close-pair",
        "--n",
        "4",
        "--delta",
        "0.5",
        "--p",
        "0",
        "--q",
        "3",
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success());
    assert_eq!(
        fs::read_to_string(&path).unwrap().trim(),
        r#"{"kind":"distance","n":4,"rows":[[0.0,1.0,1.0,0.5],[1.0,0.0,1.0,1.0],[1.0,1.0,0.0,1.0],[0.5,1.0,1.0,0.0]]}"#
    );

    let out = qestim(&[
        "gen",
        "--kind",
        "constant",
        "--n",
        "4",
        "--value",
        "0.5",
        "--ell",
        "1",
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success());
    assert_eq!(
        fs::read_to_string(&path).unwrap().trim(),
        r#"{"kind":"real","ell":1,"values":[0.5,0.5,0.5,0.5]}"#
    );

    let out = qestim(&[
        "gen",
        "--kind",
        "boolean-density",
        "--n",
        "16",
        "--density",
        "4",
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success());
    let Instance::Real(f) = qestim::load_instance(&path).unwrap() else {
        panic!("expected a real oracle")
    };
    assert_eq!(f.values().iter().filter(|&&v| v == 1.0).count(), 4);
}

#[test]
fn every_algorithm_runs_from_the_cli() {
    let dir = TempDir::new().unwrap();
    let marks = dir.path().join("m.json");
    let perm = dir.path().join("p.json");
    let pair = dir.path().join("d.json");
    for (args, path) in [
        (
            vec!["--kind", "boolean-density", "--n", "32", "--density", "3"],
            &marks,
        ),
        (vec!["--kind", "permutation", "--n", "32"], &perm),
        (
            vec!["--kind", "close-pair", "--n", "8", "--delta", "0.25"],
            &pair,
        ),
    ] {
        let mut full = vec!["gen"];
        full.extend(args);
        full.extend(["--out", path_str(path)]);
        assert!(qestim(&full).status.success());
    }
    let runs: Vec<Vec<&str>> = vec![
        vec!["count", "--oracle", path_str(&marks), "--t", "31"],
        vec![
            "count",
            "--oracle",
            path_str(&marks),
            "--t",
            "15",
            "--backend",
            "statevector",
        ],
        vec!["search", "--oracle", path_str(&marks)],
        vec!["minimum", "--oracle", path_str(&perm)],
        vec!["mean2", "--oracle", path_str(&perm), "--mode", "interval"],
        vec!["median", "--oracle", path_str(&pair), "--t", "63"],
        vec![
            "median",
            "--oracle",
            path_str(&pair),
            "--variant",
            "mean2",
            "--ell",
            "2",
        ],
    ];
    for args in runs {
        let mut full = vec!["run"];
        full.extend(args.iter().copied());
        full.extend(["--trials", "5", "--seed", "9", "--format", "json"]);
        let out = qestim(&full);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let records: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(records.len(), 5, "{args:?}");
    }
}
