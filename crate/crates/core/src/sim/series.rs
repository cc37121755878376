use crate::error::{Error, Result};

/// Two-sided 99% standard-normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSeries {
    pub sample_times: Vec<f64>,
    pub counts: Vec<u64>,
    pub repetition_index: u32,
    pub seed_used: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedSeries {
    pub sample_times: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub ci99_low: Vec<f64>,
    pub ci99_high: Vec<f64>,
    pub repetitions: usize,
}

impl AggregatedSeries {
    /// Standard error of the mean at each sample.
    pub fn sem(&self) -> Vec<f64> {
        let root = (self.repetitions as f64).sqrt();
        self.std.iter().map(|s| s / root).collect()
    }

    /// Time and value of the largest mean; earliest wins ties.
    pub fn peak(&self) -> Option<(f64, f64)> {
        crate::analytic::argmax(&self.mean).map(|i| (self.sample_times[i], self.mean[i]))
    }
}

/// Pointwise mean, sample standard deviation and 99% normal confidence band.
///
/// Sums are accumulated in integers, so the result does not depend on the
/// order of `series`.
pub fn aggregate(series: &[ObservationSeries]) -> Result<AggregatedSeries> {
    let first = series
        .first()
        .ok_or_else(|| Error::domain("series", "needs at least one repetition"))?;
    let times = &first.sample_times;
    for s in series {
        if s.sample_times != *times || s.counts.len() != times.len() {
            return Err(Error::domain(
                "series",
                format!(
                    "repetition {} has a different sample grid",
                    s.repetition_index
                ),
            ));
        }
    }
    let n = series.len();
    let nf = n as f64;
    let mut out = AggregatedSeries {
        sample_times: times.clone(),
        mean: Vec::with_capacity(times.len()),
        std: Vec::with_capacity(times.len()),
        ci99_low: Vec::with_capacity(times.len()),
        ci99_high: Vec::with_capacity(times.len()),
        repetitions: n,
    };
    for i in 0..times.len() {
        let (mut sum, mut sum_sq) = (0u128, 0u128);
        for s in series {
            let c = u128::from(s.counts[i]);
            sum += c;
            sum_sq += c * c;
        }
        let mean = sum as f64 / nf;
        let std = if n > 1 {
            // n sum_sq - sum^2 >= 0 exactly by Cauchy-Schwarz
            let num = n as u128 * sum_sq - sum * sum;
            (num as f64 / (nf * (nf - 1.0))).sqrt()
        } else {
            0.0
        };
        let half = Z_99 * std / nf.sqrt();
        out.mean.push(mean);
        out.std.push(std);
        out.ci99_low.push(mean - half);
        out.ci99_high.push(mean + half);
    }
    Ok(out)
}
