//! Receiver-side evaluation: interference ratio, threshold detection and bit
//! error probability.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analytic;
use crate::config::{Scenario, ScenarioConfig};
use crate::error::{Error, Result};
use crate::tails;

/// Interference-to-total-received ratio over `[t_s, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ItrValue {
    pub t_s: f64,
    pub t_end: f64,
    pub value: f64,
}

/// `(F(t_end) - F(t_s)) / F(t_end)` for a cumulative count function `F`.
pub fn itr(cumulative: impl Fn(f64) -> f64, t_s: f64, t_end: f64) -> Result<ItrValue> {
    if !(t_s <= t_end) {
        return Err(Error::domain(
            "t_s",
            format!("must be <= t_end ({t_end}), got {t_s}"),
        ));
    }
    let total = cumulative(t_end);
    if !(total > 0.0) {
        return Err(Error::UndefinedMetric(
            "ITR is undefined when no molecules are received by t_end".into(),
        ));
    }
    Ok(ItrValue {
        t_s,
        t_end,
        value: (total - cumulative(t_s)) / total,
    })
}

/// ITR of a sampled series. `F(t)` is the running sum of every sample taken at
/// or before `t`; `t_end` is the last sample time.
pub fn itr_from_samples(times: &[f64], counts: &[f64], t_s: f64) -> Result<ItrValue> {
    let (&t_first, &t_end) = match (times.first(), times.last()) {
        (Some(a), Some(b)) if times.len() == counts.len() => (a, b),
        _ => {
            return Err(Error::domain(
                "series",
                "must be non-empty with one count per time",
            ))
        }
    };
    if t_s > t_end * (1.0 + 1e-12) || t_s < t_first {
        return Err(Error::domain(
            "t_s",
            format!("{t_s} s is outside the series range [{t_first}, {t_end}] s"),
        ));
    }
    let running: Vec<f64> = counts
        .iter()
        .scan(0.0, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    let lookup = |t: f64| {
        // last sample with time <= t (tolerant to grid rounding)
        let idx = times.partition_point(|&x| x <= t * (1.0 + 1e-12) + 1e-15);
        if idx == 0 {
            0.0
        } else {
            running[idx - 1]
        }
    };
    itr(lookup, t_s, t_end)
}

/// ITR of an analytic curve, integrating it by trapezoid.
pub fn itr_from_curve(curve: &analytic::ImpulseCurve, t_s: f64) -> Result<ItrValue> {
    let cumulative = curve.cumulative();
    let times = &curve.times;
    let t_end = *times
        .last()
        .ok_or_else(|| Error::domain("curve", "is empty"))?;
    if t_s < times[0] || t_s > t_end {
        return Err(Error::domain(
            "t_s",
            format!("{t_s} s is outside the curve range"),
        ));
    }
    let lookup = |t: f64| {
        let i = times.partition_point(|&x| x < t);
        if i == 0 {
            cumulative[0]
        } else if i >= times.len() {
            cumulative[times.len() - 1]
        } else {
            let (t0, t1) = (times[i - 1], times[i]);
            let w = (t - t0) / (t1 - t0);
            // exact for the trapezoid rule when the integrand is linear between nodes
            let c0 = curve.expected_counts[i - 1];
            let c1 = curve.expected_counts[i];
            let ct = c0 + w * (c1 - c0);
            cumulative[i - 1] + 0.5 * (c0 + ct) * (t - t0)
        }
    };
    itr(lookup, t_s, t_end)
}

/// Threshold detector: 1 when the count reaches `zeta`.
pub fn detect_bit(count: u64, zeta: u64) -> u8 {
    u8::from(count >= zeta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleMoleculeProb {
    pub value: f64,
    /// The point-observer formula exceeded 1 and was clamped.
    pub clamped: bool,
}

/// Probability that one released molecule is inside the receiver at `t`,
/// under the photolysis lower bound.
pub fn single_molecule_prob(t: f64, config: &ScenarioConfig) -> SingleMoleculeProb {
    let raw = analytic::expected_count(Scenario::Photolysis, config, t, 1.0);
    SingleMoleculeProb {
        value: raw.clamp(0.0, 1.0),
        clamped: raw > 1.0,
    }
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(
            name,
            format!("must be within [0, 1], got {p}"),
        ))
    }
}

/// `Pr(S >= zeta)` for `S ~ Binomial(n, p)`.
pub fn prob_detect_binomial(n: u64, p: f64, zeta: u64) -> Result<f64> {
    check_probability("p", p)?;
    let mode = ((n as f64 + 1.0) * p).floor().min(n as f64) as u64;
    Ok(tails::upper_tail(zeta, mode, n, |q| {
        tails::binomial_pmf(q, n, p)
    }))
}

/// `Pr(S >= zeta)` for `S ~ Poisson(mean)`.
pub fn prob_detect_poisson(mean: f64, zeta: u64) -> Result<f64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::domain(
            "mean",
            format!("must be finite and >= 0, got {mean}"),
        ));
    }
    let mode = mean.floor() as u64;
    Ok(tails::upper_tail(zeta, mode, u64::MAX, |q| {
        tails::poisson_pmf(q, mean)
    }))
}

/// Which closed form of the Gaussian tail to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussianForm {
    /// `Pr(S >= zeta) = erfc((zeta - mean) / sqrt(2 var)) / 2`.
    #[default]
    UpperTail,
    /// `[1 + erf((zeta - mean) / sqrt(2 var))] / 2`, i.e. the lower-tail CDF.
    AsPrinted,
}

impl FromStr for GaussianForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper-tail" => Ok(GaussianForm::UpperTail),
            "as-printed" => Ok(GaussianForm::AsPrinted),
            other => Err(Error::domain(
                "gaussian form",
                format!("unknown form `{other}`"),
            )),
        }
    }
}

/// Gaussian approximation of `Pr(S >= zeta)`.
pub fn prob_detect_gaussian(
    mean: f64,
    variance: f64,
    zeta: f64,
    form: GaussianForm,
) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::domain(
            "variance",
            format!("must be > 0, got {variance}"),
        ));
    }
    let z = (zeta - mean) / (2.0 * variance).sqrt();
    Ok(match form {
        GaussianForm::UpperTail => 0.5 * libm::erfc(z),
        GaussianForm::AsPrinted => 0.5 * (1.0 + libm::erf(z)),
    })
}

/// Miss probability of bit 1 weighted by its prior.
pub fn bit_error_probability(p_detect: f64, p1: f64) -> f64 {
    p1 * (1.0 - p_detect)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Binomial,
    Poisson,
    Gaussian,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Binomial, Method::Poisson, Method::Gaussian];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Binomial => "binomial",
            Method::Poisson => "poisson",
            Method::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binomial" => Ok(Method::Binomial),
            "poisson" => Ok(Method::Poisson),
            "gaussian" => Ok(Method::Gaussian),
            other => Err(Error::domain("method", format!("unknown method `{other}`"))),
        }
    }
}

/// Count model at the detection instant: `molecules` released, `mean` of
/// them expected inside the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionInput {
    pub molecules: u64,
    pub mean: f64,
}

impl DetectionInput {
    /// Per-molecule observation probability.
    pub fn probability(&self) -> f64 {
        if self.molecules == 0 {
            0.0
        } else {
            (self.mean / self.molecules as f64).clamp(0.0, 1.0)
        }
    }

    pub fn p_detect(&self, method: Method, zeta: u64, form: GaussianForm) -> Result<f64> {
        let p = self.probability();
        if zeta == 0 {
            // counts are non-negative, whatever the approximation says
            return Ok(1.0);
        }
        match method {
            Method::Binomial => prob_detect_binomial(self.molecules, p, zeta),
            Method::Poisson => prob_detect_poisson(self.mean, zeta),
            Method::Gaussian => {
                let variance = self.mean * (1.0 - p);
                if variance > 0.0 {
                    prob_detect_gaussian(self.mean, variance, zeta as f64, form)
                } else {
                    // degenerate point mass at the mean
                    Ok(if self.mean >= zeta as f64 { 1.0 } else { 0.0 })
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionResult {
    pub threshold_zeta: u64,
    pub method: Method,
    pub p_detect: f64,
    pub p_error: f64,
    pub eval_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSweep {
    /// Ordered by method, then by threshold.
    pub results: Vec<DetectionResult>,
}

impl ThresholdSweep {
    pub fn for_method(&self, method: Method) -> impl Iterator<Item = &DetectionResult> {
        self.results.iter().filter(move |r| r.method == method)
    }

    /// Smallest error probability for `method`; ties go to the smaller threshold.
    pub fn best(&self, method: Method) -> Option<&DetectionResult> {
        self.for_method(method).fold(None, |best, r| match best {
            Some(b) if b.p_error <= r.p_error => Some(b),
            _ => Some(r),
        })
    }
}

/// Error probability for every threshold in `zetas` under each method.
pub fn threshold_sweep(
    input: DetectionInput,
    zetas: std::ops::RangeInclusive<u64>,
    methods: &[Method],
    p1: f64,
    eval_time: f64,
    form: GaussianForm,
) -> Result<ThresholdSweep> {
    if zetas.is_empty() {
        return Err(Error::domain("threshold range", "is empty"));
    }
    check_probability("P1", p1)?;
    let mut results = Vec::new();
    for &method in methods {
        for zeta in zetas.clone() {
            let p_detect = input.p_detect(method, zeta, form)?;
            results.push(DetectionResult {
                threshold_zeta: zeta,
                method,
                p_detect,
                p_error: bit_error_probability(p_detect, p1),
                eval_time,
            });
        }
    }
    Ok(ThresholdSweep { results })
}

/// Linear interpolation of a sampled signal at `t`.
pub fn sample_at(times: &[f64], values: &[f64], t: f64) -> Result<f64> {
    let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
        return Err(Error::domain("series", "is empty"));
    };
    if !(first <= t && t <= last) {
        return Err(Error::domain(
            "evaluation time",
            format!("{t} s is outside the series range [{first}, {last}]"),
        ));
    }
    let i = times.partition_point(|&x| x <= t);
    if i == 0 || i == times.len() {
        return Ok(values[i.saturating_sub(1)]);
    }
    let (t0, t1) = (times[i - 1], times[i]);
    let w = (t - t0) / (t1 - t0);
    Ok(values[i - 1] + w * (values[i] - values[i - 1]))
}

/// Fraction of repetitions whose count reached `zeta`.
pub fn empirical_p_detect(counts: &[u64], zeta: u64) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    counts.iter().filter(|&&c| detect_bit(c, zeta) == 1).count() as f64 / counts.len() as f64
}
