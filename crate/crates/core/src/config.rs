//! Scenario parameters: geometry, kinetics, timing and the RNG seed.
//!
//! Every value held here is strict SI (m, s, K, counts). Config files may use
//! the units accepted by [`crate::units`]; they are converted while parsing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::units::{Diffusivity, Length, Quantity, Rate, Temperature, Time, Viscosity, VolumeRate};

/// Which reaction, if any, removes information molecules from the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    None,
    Enzyme,
    Photolysis,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::None, Scenario::Enzyme, Scenario::Photolysis];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::None => "none",
            Scenario::Enzyme => "enzyme",
            Scenario::Photolysis => "photolysis",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Scenario::None),
            "enzyme" => Ok(Scenario::Enzyme),
            "photolysis" => Ok(Scenario::Photolysis),
            other => Err(Error::domain(
                "scenario",
                format!("`{other}` is not one of none, enzyme, photolysis"),
            )),
        }
    }
}

/// How enzymes are represented in the particle simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnzymeMode {
    /// Enzymes are explicit particles; binding happens within the Smoluchowski radius.
    Microscopic,
    /// Enzymes are a uniform background concentration.
    WellMixed,
}

/// Post-light branch of the photolysis lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Continuity {
    /// Decay factor `exp(-J t)`; the curve jumps down at the light time.
    AsWritten,
    /// Decay factor `exp(-J (t - T_op))`; continuous at the light time.
    Shifted,
}

/// Exponent of the enzyme lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnzymeExponent {
    /// `exp(-k1 E_tot t)`.
    Corrected,
    /// `exp(-k1 E_tot)`, time-independent.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub temperature: f64,
    pub viscosity: f64,
    /// Half side length of the cubic medium, centered between transmitter and receiver.
    pub half_extent: f64,
    pub diffusion_coefficient: f64,
    /// Set when the coefficient was derived through Stokes-Einstein.
    pub molecule_radius: Option<f64>,
}

impl Environment {
    pub fn medium_volume(&self) -> f64 {
        (2.0 * self.half_extent).powi(3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geometry {
    pub distance: f64,
    pub receiver_radius: f64,
    pub receiver_volume: f64,
}

impl Geometry {
    pub fn new(distance: f64, receiver_radius: f64) -> Self {
        Geometry {
            distance,
            receiver_radius,
            receiver_volume: sphere_volume(receiver_radius),
        }
    }
}

pub fn sphere_volume(radius: f64) -> f64 {
    4.0 / 3.0 * std::f64::consts::PI * radius.powi(3)
}

/// Michaelis-Menten rates `E + S <-> M_c -> E + P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnzymeKinetics {
    pub enzyme_count: u64,
    /// k1, second order (m^3/s).
    pub binding_rate: f64,
    /// k-1 (1/s).
    pub unbinding_rate: f64,
    /// k2 (1/s).
    pub degradation_rate: f64,
    /// Diffusion coefficient of free enzymes and of complexes (m^2/s).
    pub enzyme_diffusion: f64,
}

impl EnzymeKinetics {
    pub fn inactive() -> Self {
        EnzymeKinetics {
            enzyme_count: 0,
            binding_rate: 0.0,
            unbinding_rate: 0.0,
            degradation_rate: 0.0,
            enzyme_diffusion: 0.0,
        }
    }

    /// E_tot in molecules per m^3.
    pub fn total_concentration(&self, medium_volume: f64) -> f64 {
        self.enzyme_count as f64 / medium_volume
    }

    /// Smoluchowski radius solving `k1 = 4 pi (D_S + D_E) r_b`.
    pub fn binding_radius(&self, molecule_diffusion: f64) -> f64 {
        self.binding_rate
            / (4.0 * std::f64::consts::PI * (molecule_diffusion + self.enzyme_diffusion))
    }
}

/// A spherical shell of light around the receiver center. A molecule at
/// distance `rho` sees the weight of the first shell whose outer radius is
/// `>= rho`, and no light beyond the last shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub outer_radius: f64,
    pub weight: f64,
}

/// Four shells at `r + k d`, `k = 1..4`, with weights 1, 0.75, 0.5, 0.25.
pub fn default_shells(geometry: &Geometry) -> Vec<Shell> {
    [1.0, 0.75, 0.5, 0.25]
        .iter()
        .enumerate()
        .map(|(k, &weight)| Shell {
            outer_radius: geometry.receiver_radius + (k + 1) as f64 * geometry.distance,
            weight,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub wavelength_nm: f64,
    pub quantum_yield: f64,
    /// Absorption cross-section (m^2).
    pub cross_section: f64,
    /// Actinic flux (photons m^-2 s^-1 nm^-1).
    pub actinic_flux: f64,
}

impl SpectrumRow {
    pub fn integrand(&self) -> f64 {
        self.quantum_yield * self.cross_section * self.actinic_flux
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
    /// Zenith angle of the flux column, radians. Metadata only.
    #[serde(default)]
    pub zenith_angle: f64,
}

impl SpectrumTable {
    pub fn violations(&self, field: &str) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.rows.is_empty() {
            out.push(Violation::new(
                field,
                "spectrum table needs at least one row",
            ));
        }
        if self
            .rows
            .windows(2)
            .any(|w| !(w[1].wavelength_nm > w[0].wavelength_nm))
        {
            out.push(Violation::new(
                field,
                "spectrum wavelengths must be strictly increasing",
            ));
        }
        let bad = |x: f64| !(x >= 0.0) || !x.is_finite();
        if self.rows.iter().any(|r| {
            bad(r.wavelength_nm)
                || bad(r.quantum_yield)
                || bad(r.cross_section)
                || bad(r.actinic_flux)
        }) {
            out.push(Violation::new(
                field,
                "spectrum values must be finite and >= 0",
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotolysisConfig {
    /// First-order photolysis rate J (1/s).
    pub rate: f64,
    /// Light switch-on time; `None` means the optimal time d^2/(6D).
    pub light_time: Option<f64>,
    pub shells: Vec<Shell>,
    pub continuity: Continuity,
    /// Spectrum the rate was integrated from, kept for provenance.
    pub spectrum: Option<SpectrumTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionConfig {
    pub molecules: u64,
    pub symbol_period: f64,
    /// A priori probability of sending bit 1.
    pub p1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub timestep: f64,
    pub duration: f64,
    pub sample_interval: f64,
    pub repetitions: u32,
    pub master_seed: u64,
    pub scenario: Scenario,
    pub enzyme_mode: EnzymeMode,
}

impl SimulationConfig {
    /// Number of timesteps between two samples.
    pub fn steps_per_sample(&self) -> u64 {
        (self.sample_interval / self.timestep).round().max(1.0) as u64
    }

    /// Number of samples after t = 0.
    pub fn sample_count(&self) -> u64 {
        (self.duration / self.sample_interval * (1.0 + 1e-12)).floor() as u64
    }

    /// Sample grid including t = 0.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..=self.sample_count())
            .map(|k| k as f64 * self.sample_interval)
            .collect()
    }

    pub fn total_steps(&self) -> u64 {
        self.sample_count().saturating_mul(self.steps_per_sample())
    }
}

/// A full experiment description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub environment: Environment,
    pub geometry: Geometry,
    pub enzyme: EnzymeKinetics,
    pub photolysis: PhotolysisConfig,
    pub transmission: TransmissionConfig,
    pub simulation: SimulationConfig,
    pub enzyme_exponent: EnzymeExponent,
}

/// One broken invariant, addressed by its config path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ScenarioConfig {
    /// Light switch-on time, derived from the geometry unless overridden.
    pub fn light_time(&self) -> f64 {
        self.photolysis.light_time.unwrap_or_else(|| {
            self.geometry.distance.powi(2) / (6.0 * self.environment.diffusion_coefficient)
        })
    }

    /// E_tot (molecules per m^3).
    pub fn enzyme_concentration(&self) -> f64 {
        self.enzyme
            .total_concentration(self.environment.medium_volume())
    }

    /// Pseudo-first-order binding rate k1 E_tot (1/s).
    pub fn enzyme_decay_rate(&self) -> f64 {
        self.enzyme.binding_rate * self.enzyme_concentration()
    }

    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.simulation.scenario = scenario;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.simulation.master_seed = seed;
        self
    }

    /// Every invariant violation; an empty list means the config is usable
    /// by every downstream operation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut positive = |field: &str, value: f64| {
            if !(value > 0.0) || !value.is_finite() {
                out.push(Violation::new(field, "must be > 0"));
            }
        };
        let env = &self.environment;
        positive("environment.temperature", env.temperature);
        positive("environment.viscosity", env.viscosity);
        positive("environment.half_extent", env.half_extent);
        positive(
            "environment.diffusion_coefficient",
            env.diffusion_coefficient,
        );
        if let Some(radius) = env.molecule_radius {
            positive("environment.molecule_radius", radius);
        }
        let geo = &self.geometry;
        positive("geometry.distance", geo.distance);
        positive("geometry.receiver_radius", geo.receiver_radius);

        if env.half_extent <= geo.distance + geo.receiver_radius {
            out.push(Violation::new(
                "environment.half_extent",
                "medium half-extent must exceed distance + receiver radius",
            ));
        }
        let expected_volume = sphere_volume(geo.receiver_radius);
        if (geo.receiver_volume - expected_volume).abs() > 1e-12 * expected_volume.abs() {
            out.push(Violation::new(
                "geometry.receiver_volume",
                "receiver volume is inconsistent with the receiver radius",
            ));
        }

        let kin = &self.enzyme;
        for (field, value) in [
            ("enzyme.binding_rate", kin.binding_rate),
            ("enzyme.unbinding_rate", kin.unbinding_rate),
            ("enzyme.degradation_rate", kin.degradation_rate),
            ("enzyme.diffusion_coefficient", kin.enzyme_diffusion),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                out.push(Violation::new(field, "must be >= 0"));
            }
        }

        let photo = &self.photolysis;
        if !(photo.rate >= 0.0) || !photo.rate.is_finite() {
            out.push(Violation::new("photolysis.rate", "must be >= 0"));
        }
        if let Some(t) = photo.light_time {
            if !(t > 0.0) || !t.is_finite() {
                out.push(Violation::new("photolysis.light_time", "must be > 0"));
            }
        }
        out.extend(shell_violations(&photo.shells));
        if let Some(spectrum) = &photo.spectrum {
            out.extend(spectrum.violations("photolysis.spectrum"));
        }

        let tx = &self.transmission;
        if !(tx.symbol_period > 0.0) || !tx.symbol_period.is_finite() {
            out.push(Violation::new("transmission.symbol_period", "must be > 0"));
        }
        if !(0.0..=1.0).contains(&tx.p1) {
            out.push(Violation::new("transmission.p1", "must be within [0, 1]"));
        }

        let sim = &self.simulation;
        if !(sim.timestep > 0.0) || !sim.timestep.is_finite() {
            out.push(Violation::new(
                "simulation.timestep",
                "timestep must be > 0",
            ));
        } else {
            if sim.sample_interval < sim.timestep {
                out.push(Violation::new(
                    "simulation.sample_interval",
                    "sample interval must be >= timestep",
                ));
            } else {
                let ratio = sim.sample_interval / sim.timestep;
                if (ratio - ratio.round()).abs() > 1e-6 * ratio {
                    out.push(Violation::new(
                        "simulation.sample_interval",
                        "sample interval must be an integer multiple of the timestep",
                    ));
                }
            }
            if sim.scenario == Scenario::Enzyme {
                out.extend(self.enzyme_step_violations());
            }
        }
        if !(sim.sample_interval <= sim.duration) || !sim.duration.is_finite() {
            out.push(Violation::new(
                "simulation.duration",
                "duration must be >= sample interval",
            ));
        }
        if sim.repetitions < 1 {
            out.push(Violation::new("simulation.repetitions", "must be >= 1"));
        }
        if sim.master_seed > i64::MAX as u64 {
            out.push(Violation::new("simulation.seed", "must be < 2^63"));
        }
        if sim.scenario == Scenario::Enzyme
            && sim.enzyme_mode == EnzymeMode::Microscopic
            && env.diffusion_coefficient + kin.enzyme_diffusion <= 0.0
        {
            out.push(Violation::new(
                "enzyme.diffusion_coefficient",
                "microscopic binding needs a positive relative diffusion",
            ));
        }
        out
    }

    fn enzyme_step_violations(&self) -> Vec<Violation> {
        let dt = self.simulation.timestep;
        let mut rates = vec![
            ("enzyme.unbinding_rate", self.enzyme.unbinding_rate),
            ("enzyme.degradation_rate", self.enzyme.degradation_rate),
        ];
        if self.simulation.enzyme_mode == EnzymeMode::WellMixed {
            rates.push(("enzyme.binding_rate", self.enzyme_decay_rate()));
        }
        rates
            .into_iter()
            .filter(|&(_, k)| -(-k * dt).exp_m1() >= 0.1)
            .map(|(field, _)| {
                Violation::new(
                    field,
                    "per-step reaction probability 1 - exp(-k dt) must be < 0.1; reduce the timestep",
                )
            })
            .collect()
    }

    /// Validate and wrap the violations into an error.
    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.resolve()
    }

    /// Serialize in SI units. Parsing the output yields an equal config.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&RawConfig::from_resolved(self)).expect("config serializes to TOML")
    }
}

fn shell_violations(shells: &[Shell]) -> Vec<Violation> {
    let mut out = Vec::new();
    if shells
        .windows(2)
        .any(|w| !(w[1].outer_radius > w[0].outer_radius))
    {
        out.push(Violation::new(
            "photolysis.shells",
            "shell radii must be strictly increasing",
        ));
    }
    if shells.iter().any(|s| !(s.outer_radius > 0.0)) {
        out.push(Violation::new(
            "photolysis.shells",
            "shell radii must be > 0",
        ));
    }
    if shells.iter().any(|s| !(0.0..=1.0).contains(&s.weight)) {
        out.push(Violation::new(
            "photolysis.shells",
            "shell weights must be within [0, 1]",
        ));
    }
    if shells.windows(2).any(|w| w[1].weight > w[0].weight) {
        out.push(Violation::new(
            "photolysis.shells",
            "shell weights must be non-increasing",
        ));
    }
    if shells.first().is_some_and(|s| s.weight != 1.0) {
        out.push(Violation::new(
            "photolysis.shells",
            "first shell weight must be 1",
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// File schema

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    environment: RawEnvironment,
    geometry: RawGeometry,
    transmission: RawTransmission,
    simulation: RawSimulation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    enzyme: Option<RawEnzyme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    photolysis: Option<RawPhotolysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    analytic: Option<RawAnalytic>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnvironment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    temperature: Option<Quantity<Temperature>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    viscosity: Option<Quantity<Viscosity>>,
    half_extent: Quantity<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diffusion_coefficient: Option<Quantity<Diffusivity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    molecule_radius: Option<Quantity<Length>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    distance: Quantity<Length>,
    receiver_radius: Quantity<Length>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransmission {
    molecules: u64,
    symbol_period: Quantity<Time>,
    #[serde(default = "default_p1")]
    p1: f64,
}

fn default_p1() -> f64 {
    0.5
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    scenario: Scenario,
    timestep: Quantity<Time>,
    duration: Quantity<Time>,
    sample_interval: Quantity<Time>,
    repetitions: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    enzyme_mode: Option<EnzymeMode>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnzyme {
    count: u64,
    binding_rate: Quantity<VolumeRate>,
    unbinding_rate: Quantity<Rate>,
    degradation_rate: Quantity<Rate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diffusion_coefficient: Option<Quantity<Diffusivity>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhotolysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rate: Option<Quantity<Rate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    light_time: Option<Quantity<Time>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    continuity: Option<Continuity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shells: Option<Vec<RawShell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spectrum: Option<SpectrumTable>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShell {
    outer_radius: Quantity<Length>,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalytic {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    enzyme_exponent: Option<EnzymeExponent>,
}

const DEFAULT_TEMPERATURE: f64 = 298.15;
const DEFAULT_VISCOSITY: f64 = 1e-3;

impl RawConfig {
    fn resolve(self) -> Result<ScenarioConfig> {
        let temperature = self
            .environment
            .temperature
            .map_or(DEFAULT_TEMPERATURE, |q| q.si);
        let viscosity = self
            .environment
            .viscosity
            .map_or(DEFAULT_VISCOSITY, |q| q.si);
        let molecule_radius = self.environment.molecule_radius.map(|q| q.si);
        let diffusion_coefficient =
            match (self.environment.diffusion_coefficient, molecule_radius) {
                (Some(d), _) => d.si,
                (None, Some(radius)) => {
                    analytic::diffusion_coefficient(temperature, viscosity, radius)?
                }
                (None, None) => return Err(Error::Parse(
                    "environment: one of `diffusion_coefficient` or `molecule_radius` is required"
                        .into(),
                )),
            };
        let environment = Environment {
            temperature,
            viscosity,
            half_extent: self.environment.half_extent.si,
            diffusion_coefficient,
            molecule_radius,
        };
        let geometry = Geometry::new(self.geometry.distance.si, self.geometry.receiver_radius.si);
        let enzyme = match self.enzyme {
            Some(e) => EnzymeKinetics {
                enzyme_count: e.count,
                binding_rate: e.binding_rate.si,
                unbinding_rate: e.unbinding_rate.si,
                degradation_rate: e.degradation_rate.si,
                enzyme_diffusion: e
                    .diffusion_coefficient
                    .map_or(diffusion_coefficient, |q| q.si),
            },
            None => EnzymeKinetics::inactive(),
        };
        let photolysis = match self.photolysis {
            Some(p) => {
                let rate = match (p.rate, &p.spectrum) {
                    (Some(rate), _) => rate.si,
                    (None, Some(table)) => analytic::photolysis_rate(table)?,
                    (None, None) => {
                        return Err(Error::Parse(
                            "photolysis: one of `rate` or `spectrum` is required".into(),
                        ))
                    }
                };
                PhotolysisConfig {
                    rate,
                    light_time: p.light_time.map(|q| q.si),
                    shells: p.shells.map_or_else(
                        || default_shells(&geometry),
                        |shells| {
                            shells
                                .into_iter()
                                .map(|s| Shell {
                                    outer_radius: s.outer_radius.si,
                                    weight: s.weight,
                                })
                                .collect()
                        },
                    ),
                    continuity: p.continuity.unwrap_or(Continuity::AsWritten),
                    spectrum: p.spectrum,
                }
            }
            None => PhotolysisConfig {
                rate: 0.0,
                light_time: None,
                shells: default_shells(&geometry),
                continuity: Continuity::AsWritten,
                spectrum: None,
            },
        };
        Ok(ScenarioConfig {
            environment,
            geometry,
            enzyme,
            photolysis,
            transmission: TransmissionConfig {
                molecules: self.transmission.molecules,
                symbol_period: self.transmission.symbol_period.si,
                p1: self.transmission.p1,
            },
            simulation: SimulationConfig {
                timestep: self.simulation.timestep.si,
                duration: self.simulation.duration.si,
                sample_interval: self.simulation.sample_interval.si,
                repetitions: self.simulation.repetitions,
                master_seed: self.simulation.seed,
                scenario: self.simulation.scenario,
                enzyme_mode: self.simulation.enzyme_mode.unwrap_or(EnzymeMode::WellMixed),
            },
            enzyme_exponent: self
                .analytic
                .and_then(|a| a.enzyme_exponent)
                .unwrap_or(EnzymeExponent::Corrected),
        })
    }

    fn from_resolved(c: &ScenarioConfig) -> Self {
        RawConfig {
            environment: RawEnvironment {
                temperature: Some(Quantity::new(c.environment.temperature)),
                viscosity: Some(Quantity::new(c.environment.viscosity)),
                half_extent: Quantity::new(c.environment.half_extent),
                diffusion_coefficient: Some(Quantity::new(c.environment.diffusion_coefficient)),
                molecule_radius: c.environment.molecule_radius.map(Quantity::new),
            },
            geometry: RawGeometry {
                distance: Quantity::new(c.geometry.distance),
                receiver_radius: Quantity::new(c.geometry.receiver_radius),
            },
            transmission: RawTransmission {
                molecules: c.transmission.molecules,
                symbol_period: Quantity::new(c.transmission.symbol_period),
                p1: c.transmission.p1,
            },
            simulation: RawSimulation {
                scenario: c.simulation.scenario,
                timestep: Quantity::new(c.simulation.timestep),
                duration: Quantity::new(c.simulation.duration),
                sample_interval: Quantity::new(c.simulation.sample_interval),
                repetitions: c.simulation.repetitions,
                seed: c.simulation.master_seed,
                enzyme_mode: Some(c.simulation.enzyme_mode),
            },
            enzyme: Some(RawEnzyme {
                count: c.enzyme.enzyme_count,
                binding_rate: Quantity::new(c.enzyme.binding_rate),
                unbinding_rate: Quantity::new(c.enzyme.unbinding_rate),
                degradation_rate: Quantity::new(c.enzyme.degradation_rate),
                diffusion_coefficient: Some(Quantity::new(c.enzyme.enzyme_diffusion)),
            }),
            photolysis: Some(RawPhotolysis {
                rate: Some(Quantity::new(c.photolysis.rate)),
                light_time: c.photolysis.light_time.map(Quantity::new),
                continuity: Some(c.photolysis.continuity),
                shells: Some(
                    c.photolysis
                        .shells
                        .iter()
                        .map(|s| RawShell {
                            outer_radius: Quantity::new(s.outer_radius),
                            weight: s.weight,
                        })
                        .collect(),
                ),
                spectrum: c.photolysis.spectrum.clone(),
            }),
            analytic: Some(RawAnalytic {
                enzyme_exponent: Some(c.enzyme_exponent),
            }),
        }
    }
}
