use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dbmc::presets::preset;
use dbmc::ScenarioConfig;
use sha2::{Digest, Sha256};

fn dbmc(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbmc"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("DBMC_PARTICLE_STEP_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, cfg: &ScenarioConfig) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, cfg.to_toml_string()).unwrap();
    path
}

fn small_desk() -> ScenarioConfig {
    let mut cfg = preset("desk-none").unwrap();
    cfg.transmission.molecules = 500;
    cfg.simulation.duration = 0.05;
    cfg.simulation.repetitions = 6;
    cfg
}

fn column(path: &Path, col: usize) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn analytic_peak_at_optimal_time() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dbmc(
        &[
            "analytic",
            "--preset",
            "paper-table1-1",
            "--grid",
            "0:0.1:0.0001",
        ],
        tmp.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = tmp.path().join("none_curve.csv");
    let t = column(&csv, 0);
    let c = column(&csv, 1);
    let i = (0..c.len()).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap();
    assert!((t[i] - 0.0417).abs() < 1e-4, "{}", t[i]);
}

#[test]
fn analytic_is_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = dbmc(&["analytic", "--preset", "desk-enzyme"], dir.path());
        assert_eq!(code(&o), 0);
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("enzyme_curve.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn bad_grid_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    for grid in ["0.1:0:0.001", "0:1", "a:b:c", "0:1:0"] {
        let o = dbmc(&["analytic", "--grid", grid], tmp.path());
        assert_eq!(code(&o), 2, "{grid}: {}", stderr(&o));
    }
    let o = dbmc(&["analytic", "--preset", "no-such-preset"], tmp.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn invalid_config_lists_violations() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small_desk();
    cfg.environment.half_extent = 3e-6;
    cfg.simulation.timestep = -1.0;
    let path = write_config(tmp.path(), "bad.toml", &cfg);
    let o = dbmc(
        &["simulate", "--config", path.to_str().unwrap()],
        &tmp.path().join("o"),
    );
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(err.contains("environment.half_extent"), "{err}");
    assert!(err.contains("simulation.timestep"), "{err}");

    fs::write(
        tmp.path().join("syntax.toml"),
        "[environment]\nhalf_extent = \"3 parsecs\"\n",
    )
    .unwrap();
    let o = dbmc(
        &[
            "analytic",
            "--config",
            tmp.path().join("syntax.toml").to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn missing_file_is_io_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dbmc(
        &["analytic", "--config", "/nonexistent/cfg.toml"],
        tmp.path(),
    );
    assert_eq!(code(&o), 5);
    let o = dbmc(
        &["metrics", "--input", "/nonexistent/curve.csv"],
        tmp.path(),
    );
    assert_eq!(code(&o), 5);
}

#[test]
fn budget_is_enforced() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dbmc(&["simulate", "--preset", "paper-table1-2"], tmp.path());
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("simulation.timestep"), "{}", stderr(&o));
    assert!(!tmp.path().join("manifest.json").exists());

    let path = write_config(tmp.path(), "c.toml", &small_desk());
    let o = Command::new(env!("CARGO_BIN_EXE_dbmc"))
        .args(["simulate", "--config", path.to_str().unwrap(), "--out"])
        .arg(tmp.path().join("o"))
        .env("DBMC_PARTICLE_STEP_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("ceiling is 1000"));
}

#[test]
fn zero_molecules_gives_zero_aggregate() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small_desk();
    cfg.transmission.molecules = 0;
    cfg.simulation.repetitions = 1;
    let path = write_config(tmp.path(), "zero.toml", &cfg);
    let out = tmp.path().join("o");
    let o = dbmc(&["simulate", "--config", path.to_str().unwrap()], &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let seed = cfg.simulation.master_seed;
    let agg = out.join(format!("none_{seed}_aggregate.csv"));
    for col in 1..5 {
        assert!(column(&agg, col).iter().all(|&v| v == 0.0));
    }
    assert!(out.join(format!("none_{seed}_0.csv")).exists());
}

#[test]
fn simulate_independent_of_workers_and_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_config(
        tmp.path(),
        "c.toml",
        &small_desk().with_scenario(dbmc::Scenario::Enzyme),
    );
    let mut files = Vec::new();
    for (i, workers) in ["1", "8", "1"].iter().enumerate() {
        let out = tmp.path().join(format!("w{i}"));
        let o = dbmc(
            &[
                "simulate",
                "--config",
                path.to_str().unwrap(),
                "--workers",
                workers,
                "--seed",
                "5",
            ],
            &out,
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        files.push(fs::read(out.join("enzyme_5_aggregate.csv")).unwrap());
        assert_eq!(
            fs::read(out.join("enzyme_5_3.csv")).unwrap(),
            fs::read(tmp.path().join("w0/enzyme_5_3.csv")).unwrap()
        );
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
}

#[test]
fn manifest_checksums_match_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_config(tmp.path(), "c.toml", &small_desk());
    let out = tmp.path().join("o");
    assert_eq!(
        code(&dbmc(
            &["simulate", "--config", path.to_str().unwrap()],
            &out
        )),
        0
    );
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 7);
    for entry in outputs {
        let bytes = fs::read(out.join(entry["file"].as_str().unwrap())).unwrap();
        let digest: String = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        assert_eq!(entry["sha256"].as_str().unwrap(), digest);
    }
    // the snapshot reproduces the run's config
    let snapshot = manifest["configs"][0]["toml"].as_str().unwrap();
    assert_eq!(
        ScenarioConfig::from_toml_str(snapshot).unwrap(),
        small_desk()
    );
    assert_eq!(
        manifest["configs"][0]["master_seed"],
        small_desk().simulation.master_seed
    );
}

#[test]
fn metrics_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let series = tmp.path().join("early.csv");
    fs::write(&series, "time_s,count\n0,0\n0.05,3\n0.1,0\n0.15,0\n0.2,0\n").unwrap();
    let out = tmp.path().join("o");
    let o = dbmc(
        &[
            "metrics",
            "--input",
            series.to_str().unwrap(),
            "--ts",
            "0.1",
            "--zeta",
            "0:0",
        ],
        &out,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(column(&out.join("early_itr.csv"), 2), vec![0.0]);
    let pe = fs::read_to_string(out.join("early_pe.csv")).unwrap();
    assert_eq!(
        pe,
        "zeta,method,p_detect,p_error,scenario\n0,binomial,1,0,early\n0,poisson,1,0,early\n0,gaussian,1,0,early\n"
    );

    let o = dbmc(
        &[
            "metrics",
            "--input",
            series.to_str().unwrap(),
            "--ts",
            "0.5",
        ],
        &out,
    );
    assert_eq!(code(&o), 1, "{}", stderr(&o));
}

#[test]
fn compare_identical_and_mismatched() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = preset("desk-none").unwrap();
    let paths: Vec<PathBuf> = (0..3)
        .map(|i| write_config(tmp.path(), &format!("n{i}.toml"), &cfg))
        .collect();
    let mut args = vec!["compare", "--method", "poisson"];
    for p in &paths {
        args.extend(["--config", p.to_str().unwrap()]);
    }
    let out = tmp.path().join("o");
    let o = dbmc(&args, &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(out.join("compare.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| *r == rows[0]));

    let mut far = cfg.clone();
    far.geometry = dbmc::config::Geometry::new(8e-6, 1e-6);
    let far = write_config(tmp.path(), "far.toml", &far);
    let o = dbmc(
        &[
            "compare",
            "--config",
            paths[0].to_str().unwrap(),
            "--config",
            far.to_str().unwrap(),
        ],
        &out,
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("geometry"));
}
