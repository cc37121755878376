//! One PASS/FAIL line per acceptance criterion. Lines go straight to the
//! process stdout so they show up without `--nocapture`. The `cli` module
//! holds the command-line contract tests.

mod cli;

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use dbmc::analytic::{expected_count_no_reaction, impulse_curve, optimal_light_time, uniform_grid};
use dbmc::config::{EnzymeExponent, EnzymeMode, Geometry};
use dbmc::detection::{
    bit_error_probability, itr_from_samples, prob_detect_binomial, prob_detect_gaussian,
    prob_detect_poisson, DetectionInput, GaussianForm, Method,
};
use dbmc::presets::preset;
use dbmc::sim::{
    brownian_step, repetition_rng, AggregatedSeries, ChannelState, Particle, Simulator, Species,
};
use dbmc::summary::{summarize_analytic, SummaryOptions};
use dbmc::{Scenario, ScenarioConfig};
use rand::Rng;

fn report(id: &str, what: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{verdict} [{id}] {what}: {detail}").unwrap();
    out.flush().unwrap();
    assert!(pass, "[{id}] {what}: {detail}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

struct Desk {
    config: ScenarioConfig,
    series: AggregatedSeries,
    elapsed: Duration,
}

/// Calibrated desk presets, simulated once and shared.
fn desk() -> &'static [Desk; 3] {
    static RUNS: OnceLock<[Desk; 3]> = OnceLock::new();
    RUNS.get_or_init(|| {
        ["desk-none", "desk-enzyme", "desk-photolysis"].map(|name| {
            let config = preset(name).unwrap();
            let start = Instant::now();
            let series = Simulator::default()
                .run_aggregated(&config, workers())
                .unwrap();
            Desk {
                config,
                series,
                elapsed: start.elapsed(),
            }
        })
    })
}

#[test]
fn c1_optimal_time() {
    let mut worst: f64 = 0.0;
    for d in [5e-6, 7.5e-6, 10e-6] {
        for diffusion in [5e-11, 1e-10] {
            let t_op = optimal_light_time(d, diffusion).unwrap();
            let mut cfg = preset("desk-none").unwrap();
            cfg.geometry = Geometry::new(d, 1e-6);
            cfg.environment.diffusion_coefficient = diffusion;
            let grid = uniform_grid(t_op / 2000.0, 3.0 * t_op, t_op / 2000.0).unwrap();
            let values: Vec<f64> = grid
                .iter()
                .map(|&t| expected_count_no_reaction(t, &cfg.geometry, &cfg.environment, 1.0))
                .collect();
            let i = (0..values.len())
                .max_by(|&a, &b| values[a].total_cmp(&values[b]))
                .unwrap();
            worst = worst.max((grid[i] - t_op).abs() / t_op);
        }
    }
    let t = optimal_light_time(5e-6, 1e-10).unwrap();
    report(
        "1",
        "argmax of the free-diffusion curve equals d^2/6D",
        worst <= 0.005 && (t - 0.04).abs() <= 0.005,
        format!(
            "max relative gap {worst:.2e} (tol 5e-3); T_op(5 um, 1e-10) = {t:.4} s vs 0.04 ± 0.005"
        ),
    );
}

#[test]
fn c2_simulator_matches_point_observer() {
    let mut cfg = preset("desk-none").unwrap();
    cfg.geometry = Geometry::new(10e-6, 1e-6);
    cfg.transmission.molecules = 100_000;
    cfg.simulation.repetitions = 50;
    let start = Instant::now();
    let sim = Simulator::default()
        .run_aggregated(&cfg, workers())
        .unwrap();
    let elapsed = start.elapsed();
    let (sim_t, sim_peak) = sim.peak().unwrap();
    let curve = impulse_curve(Scenario::None, &cfg, &sim.sample_times).unwrap();
    let (_, peak) = curve.peak().unwrap();
    let t_op = cfg.light_time();
    let amp = (sim_peak - peak).abs() / peak;
    let time = (sim_t - t_op).abs() / t_op;
    report(
        "2",
        "simulated peak vs closed form, d = 10 um, N = 1e5, 50 reps",
        amp <= 0.2 && time <= 0.2 && elapsed < Duration::from_secs(300),
        format!(
            "peak {sim_peak:.2} vs {peak:.2} ({:.1}%), at {sim_t:.3} s vs T_op {t_op:.4} s ({:.1}%), {:.0} s",
            amp * 100.0,
            time * 100.0,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c3_enzyme_lower_bound() {
    let run = &desk()[1];
    assert_eq!(run.config.simulation.enzyme_mode, EnzymeMode::WellMixed);
    assert_eq!(run.config.enzyme_exponent, EnzymeExponent::Corrected);
    let bound = impulse_curve(Scenario::Enzyme, &run.config, &run.series.sample_times).unwrap();
    let sem = run.series.sem();
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let (mut degenerate, mut degenerate_max) = (0, 0.0f64);
    for ((&mean, &sem), &bound) in run.series.mean.iter().zip(&sem).zip(&bound.expected_counts) {
        let slack = mean + 3.0 * sem - bound;
        if slack < 0.0 {
            violations += 1;
            if sem == 0.0 {
                degenerate += 1;
                degenerate_max = degenerate_max.max(bound);
            }
        }
        worst = worst.max(-slack);
    }
    // every repetition counting zero leaves a zero-width band that no
    // positive bound can sit under
    writeln!(
        std::io::stdout().lock(),
        "NOTE [3] {degenerate} of {violations} violations are at samples where all {} repetitions counted 0 \
         (SEM = 0, bound <= {degenerate_max:.1e})",
        run.series.repetitions
    )
    .unwrap();
    report(
        "3",
        "enzyme closed form <= simulated mean + 3 SEM at every sample",
        violations == 0 && run.elapsed < Duration::from_secs(300),
        format!(
            "{violations} of {} samples violate (largest excess {worst:.3}), {:.0} s",
            sem.len(),
            run.elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c4_scenario_orderings() {
    let [none, enzyme, photo] = desk();
    let peak = |d: &Desk| d.series.peak().unwrap().1;
    let itr = |d: &Desk| {
        itr_from_samples(&d.series.sample_times, &d.series.mean, 0.1)
            .unwrap()
            .value
    };
    let enzyme_ratio = peak(enzyme) / peak(none);
    let photo_ratio = peak(photo) / peak(none);
    let (i_none, i_enz, i_photo) = (itr(none), itr(enzyme), itr(photo));
    report(
        "4",
        "desk amplitude ratios and ITR ordering at t_s = 0.1 s",
        (enzyme_ratio - 0.64).abs() <= 0.10 && photo_ratio >= 0.95 && i_photo < i_none && i_none < i_enz,
        format!(
            "enzyme/none {enzyme_ratio:.3} (0.64 ± 0.10), photolysis/none {photo_ratio:.3} (>= 0.95), \
             ITR photolysis {i_photo:.4} < none {i_none:.4} < enzyme {i_enz:.4}"
        ),
    );
}

#[test]
fn c5_approximation_accuracy() {
    let n = 1000u64;
    let mut pass = true;
    let mut detail = Vec::new();
    for p in [0.005, 0.01, 0.02, 0.05] {
        let mean = n as f64 * p;
        let (mut poisson_gap, mut gauss_gap) = (0.0f64, 0.0f64);
        for zeta in 0..=80 {
            let b = prob_detect_binomial(n, p, zeta).unwrap();
            poisson_gap = poisson_gap.max((prob_detect_poisson(mean, zeta).unwrap() - b).abs());
            let g =
                prob_detect_gaussian(mean, mean * (1.0 - p), zeta as f64, GaussianForm::UpperTail)
                    .unwrap();
            gauss_gap = gauss_gap.max((g - b).abs());
        }
        pass &= poisson_gap <= 0.01 && poisson_gap <= gauss_gap;
        if mean >= 20.0 {
            pass &= gauss_gap <= 0.05;
        }
        detail.push(format!(
            "p={p}: poisson {poisson_gap:.4}, gaussian {gauss_gap:.4}"
        ));
    }
    report(
        "5",
        "max |approx - binomial| over zeta 0..80 at N = 1000",
        pass,
        detail.join("; "),
    );
}

#[test]
fn c6a_error_at_threshold_seven() {
    let pe = bit_error_probability(prob_detect_poisson(24.78, 7).unwrap(), 0.5);
    report(
        "6a",
        "Pe at Poisson mean 24.78, zeta = 7, P1 = 0.5",
        pe < 1e-3,
        format!("Pe = {pe:.3e} (< 1e-3)"),
    );
}

#[test]
fn c6b_error_monotone_in_threshold() {
    let mut checked = 0;
    let mut pass = true;
    let means = [24.78, 0.5, 5.0, 60.0];
    for mean in means {
        let input = DetectionInput {
            molecules: 10_000,
            mean,
        };
        for method in Method::ALL {
            let mut last = 0.0;
            for zeta in 0..=80 {
                let pe = bit_error_probability(
                    input
                        .p_detect(method, zeta, GaussianForm::UpperTail)
                        .unwrap(),
                    0.5,
                );
                pass &= pe >= last;
                last = pe;
                checked += 1;
            }
        }
    }
    report(
        "6b",
        "Pe non-decreasing in zeta for every method",
        pass,
        format!("{checked} thresholds over means {means:?}"),
    );
}

fn summaries(method: Method) -> [dbmc::summary::SignalSummary; 3] {
    let opts = SummaryOptions {
        zetas: 1..=80,
        methods: vec![method],
        ..SummaryOptions::default()
    };
    ["desk-none", "desk-enzyme", "desk-photolysis"]
        .map(|name| summarize_analytic(&preset(name).unwrap(), &opts).unwrap())
}

#[test]
fn c6c_min_error_ordering() {
    let [n, e, p] = summaries(Method::Poisson);
    // Pr(S >= zeta) grows with the mean, so a smaller mean cannot lower the minimum
    writeln!(
        std::io::stdout().lock(),
        "NOTE [6c] expected counts at T_op = {:.4} s: none {:.3}, enzyme {:.3}, photolysis {:.3}",
        n.eval_time,
        n.eval_mean,
        e.eval_mean,
        p.eval_mean
    )
    .unwrap();

    let mut pass = true;
    let mut detail = Vec::new();
    for method in Method::ALL {
        let [n, e, p] = summaries(method).map(|s| s.sweep.best(method).unwrap().p_error);
        pass &= p <= e && e <= n;
        detail.push(format!(
            "{method}: photolysis {p:.3e}, enzyme {e:.3e}, none {n:.3e}"
        ));
    }
    report(
        "6c",
        "min Pe photolysis <= enzyme <= none on analytic desk curves at T_op, zeta 1..80",
        pass,
        detail.join("; "),
    );
}

#[test]
fn c7_property_suites() {
    let start = Instant::now();

    // conservation: 10^4 steps per scenario, rates redrawn every 500 steps
    let mut rng = repetition_rng(7, 0);
    let mut conserved = true;
    for scenario in Scenario::ALL {
        for mode in [EnzymeMode::WellMixed, EnzymeMode::Microscopic] {
            if scenario != Scenario::Enzyme && mode == EnzymeMode::Microscopic {
                continue;
            }
            let mut cfg = preset("desk-none").unwrap().with_scenario(scenario);
            cfg.simulation.enzyme_mode = mode;
            cfg.transmission.molecules = 200;
            cfg.enzyme.enzyme_count = 300;
            cfg.simulation.timestep = 1e-4;
            cfg.simulation.sample_interval = 1e-4;
            cfg.simulation.duration = 0.05;
            for _ in 0..20 {
                cfg.enzyme.unbinding_rate = rng.random_range(0.0..500.0);
                cfg.enzyme.degradation_rate = rng.random_range(0.0..500.0);
                cfg.photolysis.rate = rng.random_range(0.0..800.0);
                cfg.photolysis.light_time = Some(rng.random_range(1e-4..0.05));
                cfg.enzyme.binding_rate = match mode {
                    EnzymeMode::WellMixed => {
                        rng.random_range(0.0..800.0) / cfg.enzyme_concentration()
                    }
                    EnzymeMode::Microscopic => {
                        4.0 * std::f64::consts::PI * 2e-10 * rng.random_range(0.0..1e-6)
                    }
                };
                let mut state = ChannelState::new(&cfg, rng.random_range(0..1000));
                for _ in 0..500 {
                    state.step();
                    conserved &= state.species_counts().total() == 200;
                }
            }
        }
    }

    // variance of one step, per axis
    let (diffusion, dt, n) = (1e-10, 1e-3, 100_000);
    let mut ps = vec![Particle::new([0.0; 3], Species::Information); n];
    brownian_step(&mut ps, diffusion, dt, &mut repetition_rng(11, 0));
    let worst_var = (0..3)
        .map(|axis| {
            let var = ps.iter().map(|p| p.position[axis].powi(2)).sum::<f64>() / n as f64;
            (var / (2.0 * diffusion * dt) - 1.0).abs()
        })
        .fold(0.0, f64::max);

    // survival under light covering the whole medium
    let mut cfg = preset("desk-photolysis").unwrap();
    cfg.transmission.molecules = 20_000;
    cfg.photolysis.rate = 20.0;
    cfg.photolysis.light_time = Some(1e-12);
    cfg.photolysis.shells = vec![dbmc::config::Shell {
        outer_radius: 1.0,
        weight: 1.0,
    }];
    let mut state = ChannelState::new(&cfg, 0);
    for _ in 0..40 {
        state.step();
    }
    // the first step starts before the light, so exposure is 39 steps
    let expect = (-20.0 * 39.0 * cfg.simulation.timestep).exp();
    let survived = state.species_counts().information as f64 / 20_000.0;
    let sigma = (expect * (1.0 - expect) / 20_000.0).sqrt();
    let survival_z = (survived - expect).abs() / sigma;

    // byte-identical CLI output for 1, 4 and 8 workers
    let tmp = tempfile::tempdir().unwrap();
    let mut small = preset("desk-enzyme").unwrap();
    small.transmission.molecules = 2000;
    small.simulation.repetitions = 12;
    small.simulation.duration = 0.1;
    let path = tmp.path().join("small.toml");
    std::fs::write(&path, small.to_toml_string()).unwrap();
    let outputs: Vec<Vec<(String, Vec<u8>)>> = ["1", "4", "8"]
        .iter()
        .map(|w| {
            let dir = tmp.path().join(format!("w{w}"));
            let run = Command::new(env!("CARGO_BIN_EXE_dbmc"))
                .args([
                    "simulate",
                    "--config",
                    path.to_str().unwrap(),
                    "--workers",
                    w,
                    "--out",
                ])
                .arg(&dir)
                .env_remove("DBMC_PARTICLE_STEP_BUDGET")
                .output()
                .unwrap();
            assert!(run.status.success());
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
                .unwrap()
                .map(|e| e.unwrap())
                .filter(|e| e.file_name().to_string_lossy().ends_with(".csv"))
                .map(|e| {
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            files.sort();
            files
        })
        .collect();
    let identical = outputs[0].len() == 13 && outputs.iter().all(|o| *o == outputs[0]);

    let elapsed = start.elapsed();
    report(
        "7",
        "conservation, step variance, light survival, worker-independent output",
        conserved && worst_var <= 0.03 && survival_z <= 3.0 && identical && elapsed < Duration::from_secs(600),
        format!(
            "conserved {conserved}; variance off by {:.2}% (<= 3%); survival {survived:.4} vs {expect:.4} \
             ({survival_z:.2} sigma); outputs identical {identical}; {:.0} s",
            worst_var * 100.0,
            elapsed.as_secs_f64()
        ),
    );
}
