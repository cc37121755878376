//! Per-scenario figures of merit: peak, ITR and the best threshold.

use std::ops::RangeInclusive;

use crate::analytic::{self, argmax, ImpulseCurve};
use crate::config::{Scenario, ScenarioConfig};
use crate::detection::{
    itr_from_curve, itr_from_samples, sample_at, threshold_sweep, DetectionInput, GaussianForm,
    ItrValue, Method, ThresholdSweep,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryOptions {
    /// Defaults to the config's symbol period.
    pub t_s: Option<f64>,
    pub zetas: RangeInclusive<u64>,
    pub methods: Vec<Method>,
    pub form: GaussianForm,
    /// Detection instant; defaults to the config's light time.
    pub eval_time: Option<f64>,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            t_s: None,
            zetas: 0..=40,
            methods: Method::ALL.to_vec(),
            form: GaussianForm::UpperTail,
            eval_time: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSummary {
    pub scenario: Scenario,
    pub peak_time: f64,
    pub peak_mean: f64,
    pub itr: ItrValue,
    pub eval_time: f64,
    pub eval_mean: f64,
    pub sweep: ThresholdSweep,
}

/// Summarize a mean-count signal of `config`. Closed-form curves
/// (`is_curve`) are integrated by trapezoid, sampled means by running sum.
pub fn summarize(
    config: &ScenarioConfig,
    times: &[f64],
    values: &[f64],
    is_curve: bool,
    opts: &SummaryOptions,
) -> Result<SignalSummary> {
    summarize_with(config, times, values, is_curve, opts, |t| {
        sample_at(times, values, t)
    })
}

fn summarize_with(
    config: &ScenarioConfig,
    times: &[f64],
    values: &[f64],
    is_curve: bool,
    opts: &SummaryOptions,
    mean_at: impl Fn(f64) -> Result<f64>,
) -> Result<SignalSummary> {
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::domain(
            "signal",
            "needs equally many times and values, at least one",
        ));
    }
    let i = argmax(values).expect("non-empty");
    let t_s = opts.t_s.unwrap_or(config.transmission.symbol_period);
    let itr = if is_curve {
        itr_from_curve(
            &ImpulseCurve {
                scenario: config.simulation.scenario,
                times: times.to_vec(),
                expected_counts: values.to_vec(),
            },
            t_s,
        )?
    } else {
        itr_from_samples(times, values, t_s)?
    };
    let eval_time = opts.eval_time.unwrap_or_else(|| config.light_time());
    let eval_mean = mean_at(eval_time)?;
    let input = DetectionInput {
        molecules: config.transmission.molecules,
        mean: eval_mean,
    };
    let sweep = threshold_sweep(
        input,
        opts.zetas.clone(),
        &opts.methods,
        config.transmission.p1,
        eval_time,
        opts.form,
    )?;
    Ok(SignalSummary {
        scenario: config.simulation.scenario,
        peak_time: times[i],
        peak_mean: values[i],
        itr,
        eval_time,
        eval_mean,
        sweep,
    })
}

/// Summary of the closed-form curve on the config's sampling grid. The
/// detection mean comes from the closed form at the exact instant, since the
/// photolysis curve jumps at the light time.
pub fn summarize_analytic(config: &ScenarioConfig, opts: &SummaryOptions) -> Result<SignalSummary> {
    let times = config.simulation.sample_times();
    let scenario = config.simulation.scenario;
    let curve = analytic::impulse_curve(scenario, config, &times)?;
    let n = config.transmission.molecules as f64;
    summarize_with(
        config,
        &curve.times,
        &curve.expected_counts,
        true,
        opts,
        |t| Ok(analytic::expected_count(scenario, config, t, n)),
    )
}

/// Configs compared side by side must share geometry and molecule count.
pub fn check_comparable(configs: &[ScenarioConfig]) -> Result<()> {
    let Some(first) = configs.first() else {
        return Err(Error::domain("comparison", "needs at least one config"));
    };
    for c in &configs[1..] {
        if c.geometry != first.geometry {
            return Err(Error::domain(
                "geometry",
                "differs between compared configs (distance and receiver radius must match)",
            ));
        }
        if c.transmission.molecules != first.transmission.molecules {
            return Err(Error::domain(
                "transmission.molecules",
                "differs between compared configs",
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub scenario: Scenario,
    pub method: Method,
    pub peak_mean: f64,
    pub peak_time: f64,
    /// Peak relative to the first no-reaction summary; NaN without one.
    pub amplitude_ratio: f64,
    pub itr: f64,
    pub min_pe: f64,
    pub argmin_zeta: u64,
}

pub fn compare_rows(summaries: &[SignalSummary], methods: &[Method]) -> Vec<CompareRow> {
    let reference = summaries
        .iter()
        .find(|s| s.scenario == Scenario::None)
        .map_or(f64::NAN, |s| s.peak_mean);
    let mut rows = Vec::new();
    for s in summaries {
        for &method in methods {
            let Some(best) = s.sweep.best(method) else {
                continue;
            };
            rows.push(CompareRow {
                scenario: s.scenario,
                method,
                peak_mean: s.peak_mean,
                peak_time: s.peak_time,
                amplitude_ratio: s.peak_mean / reference,
                itr: s.itr.value,
                min_pe: best.p_error,
                argmin_zeta: best.threshold_zeta,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn identical_configs_give_identical_rows() {
        let cfg = preset("desk-none").unwrap();
        let opts = SummaryOptions::default();
        let s: Vec<_> = (0..3)
            .map(|_| summarize_analytic(&cfg, &opts).unwrap())
            .collect();
        let rows = compare_rows(&s, &[Method::Poisson]);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], rows[1]);
        assert_eq!(rows[1], rows[2]);
        assert_eq!(rows[0].amplitude_ratio, 1.0);
    }

    #[test]
    fn mismatched_geometry_is_rejected() {
        let a = preset("desk-none").unwrap();
        let mut b = preset("desk-enzyme").unwrap();
        assert!(check_comparable(&[a.clone(), b.clone()]).is_ok());
        b.geometry.distance *= 2.0;
        assert!(matches!(
            check_comparable(&[a, b]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn photolysis_keeps_amplitude() {
        let opts = SummaryOptions::default();
        let none = summarize_analytic(&preset("desk-none").unwrap(), &opts).unwrap();
        let photo = summarize_analytic(&preset("desk-photolysis").unwrap(), &opts).unwrap();
        let rows = compare_rows(&[none, photo], &[Method::Poisson]);
        assert!((rows[1].amplitude_ratio - 1.0).abs() < 0.01);
        assert!(rows[1].itr < rows[0].itr);
    }

    #[test]
    fn analytic_mean_taken_after_the_switch() {
        let cfg = preset("desk-photolysis").unwrap();
        let s = summarize_analytic(&cfg, &SummaryOptions::default()).unwrap();
        let none = analytic::expected_count(Scenario::None, &cfg, cfg.light_time(), 1e4);
        let expect = none * (-cfg.photolysis.rate * cfg.light_time()).exp();
        assert!((s.eval_mean - expect).abs() < 1e-12 * none);
    }
}
