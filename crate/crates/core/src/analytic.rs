//! Closed-form channel models.
//!
//! The receiver is treated as a point observer: the expected count is the
//! free-space concentration at the receiver center times the receiver volume.

use std::f64::consts::PI;

use crate::config::{
    Continuity, Environment, EnzymeExponent, Geometry, Scenario, ScenarioConfig, SpectrumTable,
};
use crate::error::{Error, Result};

/// Boltzmann constant (J/K), exact SI value.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Stokes-Einstein diffusion coefficient `k_B T / (6 pi eta R)`.
pub fn diffusion_coefficient(temperature: f64, viscosity: f64, radius: f64) -> Result<f64> {
    for (name, value) in [
        ("temperature", temperature),
        ("viscosity", viscosity),
        ("molecule radius", radius),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::domain(name, format!("must be > 0, got {value}")));
        }
    }
    Ok(BOLTZMANN * temperature / (6.0 * PI * viscosity * radius))
}

/// Peak time of the no-reaction impulse response, `d^2 / (6 D)`.
pub fn optimal_light_time(distance: f64, diffusion: f64) -> Result<f64> {
    if !(diffusion > 0.0) {
        return Err(Error::domain(
            "diffusion coefficient",
            format!("must be > 0, got {diffusion}"),
        ));
    }
    if !(distance >= 0.0) {
        return Err(Error::domain(
            "distance",
            format!("must be >= 0, got {distance}"),
        ));
    }
    Ok(distance * distance / (6.0 * diffusion))
}

/// Photolysis rate J: trapezoidal integral of `phi * sigma * F` over the
/// tabulated wavelengths. A single row counts as a 1 nm bin.
pub fn photolysis_rate(table: &SpectrumTable) -> Result<f64> {
    match table.rows.as_slice() {
        [] => Err(Error::domain("spectrum table", "is empty")),
        [row] => Ok(row.integrand()),
        rows => Ok(rows
            .windows(2)
            .map(|w| {
                0.5 * (w[0].integrand() + w[1].integrand())
                    * (w[1].wavelength_nm - w[0].wavelength_nm)
            })
            .sum()),
    }
}

/// Point-observer density at the receiver, per released molecule and unit
/// volume, frozen at time `t`.
fn spatial_factor(t: f64, distance: f64, diffusion: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let four_dt = 4.0 * diffusion * t;
    (-distance * distance / four_dt).exp() / (PI * four_dt).powf(1.5)
}

/// Expected molecule count with no reaction:
/// `N V / (8 (pi D t)^{3/2}) exp(-d^2 / (4 D t))`, and 0 at `t = 0`.
pub fn expected_count_no_reaction(
    t: f64,
    geom: &Geometry,
    env: &Environment,
    molecules: f64,
) -> f64 {
    // (4 pi D t)^{3/2} = 8 (pi D t)^{3/2}
    molecules * geom.receiver_volume * spatial_factor(t, geom.distance, env.diffusion_coefficient)
}

/// Lower bound on the expected count with enzymes at pseudo-first-order rate
/// `k1 * E_tot`.
pub fn expected_count_enzyme(
    t: f64,
    geom: &Geometry,
    env: &Environment,
    molecules: f64,
    decay_rate: f64,
    exponent: EnzymeExponent,
) -> f64 {
    let free = expected_count_no_reaction(t, geom, env, molecules);
    let decay = match exponent {
        EnzymeExponent::Corrected => (-decay_rate * t).exp(),
        EnzymeExponent::AsPrinted => (-decay_rate).exp(),
    };
    free * decay
}

/// Lower bound on the expected count when light at rate `J` is switched on at
/// `light_time`. After the switch the spatial factor stays frozen at its
/// value at `light_time`.
pub fn expected_count_photolysis(
    t: f64,
    geom: &Geometry,
    env: &Environment,
    molecules: f64,
    rate: f64,
    light_time: f64,
    continuity: Continuity,
) -> f64 {
    if t < light_time {
        return expected_count_no_reaction(t, geom, env, molecules);
    }
    let frozen = expected_count_no_reaction(light_time, geom, env, molecules);
    let exposure = match continuity {
        Continuity::AsWritten => t,
        Continuity::Shifted => t - light_time,
    };
    frozen * (-rate * exposure).exp()
}

/// Expected count of `scenario` at time `t` using the parameters of `config`.
pub fn expected_count(scenario: Scenario, config: &ScenarioConfig, t: f64, molecules: f64) -> f64 {
    let (geom, env) = (&config.geometry, &config.environment);
    match scenario {
        Scenario::None => expected_count_no_reaction(t, geom, env, molecules),
        Scenario::Enzyme => expected_count_enzyme(
            t,
            geom,
            env,
            molecules,
            config.enzyme_decay_rate(),
            config.enzyme_exponent,
        ),
        Scenario::Photolysis => expected_count_photolysis(
            t,
            geom,
            env,
            molecules,
            config.photolysis.rate,
            config.light_time(),
            config.photolysis.continuity,
        ),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseCurve {
    pub scenario: Scenario,
    pub times: Vec<f64>,
    pub expected_counts: Vec<f64>,
}

impl ImpulseCurve {
    /// Time and value of the largest point; earliest wins ties.
    pub fn peak(&self) -> Option<(f64, f64)> {
        argmax(&self.expected_counts).map(|i| (self.times[i], self.expected_counts[i]))
    }

    /// Running trapezoidal integral, starting at 0 on the first grid point.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.times.len());
        out.push(0.0);
        for i in 1..self.times.len() {
            acc += 0.5
                * (self.expected_counts[i] + self.expected_counts[i - 1])
                * (self.times[i] - self.times[i - 1]);
            out.push(acc);
        }
        out.truncate(self.times.len());
        out
    }
}

pub(crate) fn argmax(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}

/// Evaluate the expected count of `scenario` on a time grid.
pub fn impulse_curve(
    scenario: Scenario,
    config: &ScenarioConfig,
    times: &[f64],
) -> Result<ImpulseCurve> {
    if times.is_empty() {
        return Err(Error::domain("time grid", "is empty"));
    }
    if times.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) {
        return Err(Error::domain(
            "time grid",
            "must contain finite non-negative times",
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("time grid", "must be strictly increasing"));
    }
    let n = config.transmission.molecules as f64;
    Ok(ImpulseCurve {
        scenario,
        times: times.to_vec(),
        expected_counts: times
            .iter()
            .map(|&t| expected_count(scenario, config, t, n))
            .collect(),
    })
}

/// `start, start + step, ...` up to and including `stop` (within rounding).
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain("grid step", "must be > 0"));
    }
    if !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::domain("grid", "stop must be >= start"));
    }
    let n = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}
