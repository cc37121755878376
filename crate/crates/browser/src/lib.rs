//! Browser bindings: closed-form curves, an error-probability sweep and a
//! small in-page simulation. Results come back as flat `Float64Array`s so
//! the page needs no glue beyond what wasm-bindgen generates.

use dbmc::analytic::impulse_curve;
use dbmc::detection::{bit_error_probability, DetectionInput, GaussianForm, Method};
use dbmc::presets::preset;
use dbmc::sim::Simulator;
use dbmc::{Error, Scenario, ScenarioConfig};
use wasm_bindgen::prelude::*;

/// Particle-steps allowed per in-page simulation; keeps the tab responsive.
pub const PAGE_BUDGET: u128 = 300_000_000;

fn desk(scenario: Scenario) -> ScenarioConfig {
    let name = format!("desk-{scenario}");
    preset(&name).expect("desk presets exist")
}

fn domain(name: &'static str, reason: &str) -> Error {
    Error::Domain {
        name,
        reason: reason.to_string(),
    }
}

/// `[times | none | enzyme | photolysis]`, each `len` long, on the desk
/// setup with the given distance (µm), diffusion coefficient (m²/s),
/// enzyme decay rate `k1 E_tot` (1/s) and light rate `J` (1/s).
pub fn curves(
    distance_um: f64,
    diffusion: f64,
    decay_rate: f64,
    light_rate: f64,
    duration: f64,
) -> dbmc::Result<Vec<f64>> {
    let mut cfg = desk(Scenario::None);
    cfg.geometry = dbmc::config::Geometry::new(distance_um * 1e-6, cfg.geometry.receiver_radius);
    cfg.environment.diffusion_coefficient = diffusion;
    cfg.simulation.duration = duration;
    cfg.photolysis.rate = light_rate;
    cfg.photolysis.shells = dbmc::config::default_shells(&cfg.geometry);
    cfg.photolysis.light_time = None;
    cfg.enzyme = desk(Scenario::Enzyme).enzyme;
    cfg.enzyme.binding_rate = decay_rate / cfg.enzyme_concentration();
    let cfg = cfg.validated()?;
    let times = cfg.simulation.sample_times();
    let mut out = times.clone();
    for scenario in Scenario::ALL {
        out.extend(impulse_curve(scenario, &cfg, &times)?.expected_counts);
    }
    Ok(out)
}

/// `[binomial | poisson | gaussian]` error probabilities for thresholds
/// `0..=zeta_max`.
pub fn error_sweep(mean: f64, molecules: u32, zeta_max: u32, p1: f64) -> dbmc::Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(domain("P1", "must be within [0, 1]"));
    }
    if !(mean >= 0.0 && mean <= f64::from(molecules)) {
        return Err(domain("mean", "must be within [0, molecules]"));
    }
    let input = DetectionInput {
        molecules: u64::from(molecules),
        mean,
    };
    let mut out = Vec::with_capacity(3 * (zeta_max as usize + 1));
    for method in Method::ALL {
        for zeta in 0..=u64::from(zeta_max) {
            let p = input.p_detect(method, zeta, GaussianForm::UpperTail)?;
            out.push(bit_error_probability(p, p1));
        }
    }
    Ok(out)
}

/// `[times | simulated mean | closed form]` for a shortened desk preset.
pub fn simulate(
    scenario: &str,
    molecules: u32,
    repetitions: u32,
    duration: f64,
    seed: u32,
) -> dbmc::Result<Vec<f64>> {
    let scenario: Scenario = scenario.parse()?;
    let mut cfg = desk(scenario);
    cfg.transmission.molecules = u64::from(molecules);
    cfg.simulation.repetitions = repetitions;
    cfg.simulation.duration = duration;
    cfg.simulation.master_seed = u64::from(seed);
    let series = Simulator::new(PAGE_BUDGET).run_aggregated(&cfg, 1)?;
    let analytic = impulse_curve(scenario, &cfg, &series.sample_times)?;
    let mut out = series.sample_times;
    out.extend(series.mean);
    out.extend(analytic.expected_counts);
    Ok(out)
}

fn js(result: dbmc::Result<Vec<f64>>) -> Result<Vec<f64>, JsError> {
    result.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = impulseCurves)]
pub fn impulse_curves_js(
    distance_um: f64,
    diffusion: f64,
    decay_rate: f64,
    light_rate: f64,
    duration: f64,
) -> Result<Vec<f64>, JsError> {
    js(curves(
        distance_um,
        diffusion,
        decay_rate,
        light_rate,
        duration,
    ))
}

#[wasm_bindgen(js_name = errorSweep)]
pub fn error_sweep_js(
    mean: f64,
    molecules: u32,
    zeta_max: u32,
    p1: f64,
) -> Result<Vec<f64>, JsError> {
    js(error_sweep(mean, molecules, zeta_max, p1))
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(
    scenario: &str,
    molecules: u32,
    repetitions: u32,
    duration: f64,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    js(simulate(scenario, molecules, repetitions, duration, seed))
}
