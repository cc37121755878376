//! Particle-level Monte Carlo of the channel.
//!
//! Every repetition owns one ChaCha8 stream selected by its index, so results
//! do not depend on how repetitions are spread over threads.

mod particle;
mod reactions;
mod series;

pub use particle::{
    brownian_step, brownian_step_by, observe_receiver, reflect_boundary, Particle, Species, Vec3,
};
pub use reactions::{enzyme_reaction_step, photolysis_step, shell_weight, EnzymeStep};
pub use series::{aggregate, AggregatedSeries, ObservationSeries, Z_99};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{EnzymeMode, Scenario, ScenarioConfig, Shell};
use crate::error::{Error, Result};

/// Default ceiling on particle-steps for one run.
pub const DEFAULT_BUDGET: u128 = 100_000_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`] in the command-line tool.
pub const BUDGET_ENV: &str = "DBMC_PARTICLE_STEP_BUDGET";

pub fn repetition_rng(master_seed: u64, repetition: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(u64::from(repetition));
    rng
}

/// Receiver at `(-d/2, 0, 0)`, transmitter at `(d/2, 0, 0)`.
pub fn receiver_center(config: &ScenarioConfig) -> Vec3 {
    [-0.5 * config.geometry.distance, 0.0, 0.0]
}

pub fn transmitter_position(config: &ScenarioConfig) -> Vec3 {
    [0.5 * config.geometry.distance, 0.0, 0.0]
}

fn simulates_enzymes(config: &ScenarioConfig) -> bool {
    config.simulation.scenario == Scenario::Enzyme
        && config.simulation.enzyme_mode == EnzymeMode::Microscopic
}

/// Population sizes by species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpeciesCounts {
    pub information: u64,
    pub complex: u64,
    pub product: u64,
}

impl SpeciesCounts {
    pub fn total(&self) -> u64 {
        self.information + self.complex + self.product
    }
}

#[derive(Debug, Clone)]
enum Channel {
    Inert,
    Enzyme(EnzymeStep),
    Photolysis {
        rate: f64,
        light_time: f64,
        shells: Vec<Shell>,
    },
}

/// Full state of one repetition.
#[derive(Debug, Clone)]
pub struct ChannelState {
    molecules: Vec<Particle>,
    enzymes: Vec<Particle>,
    rng: ChaCha8Rng,
    channel: Channel,
    step_index: u64,
    dt: f64,
    diffusion: f64,
    enzyme_diffusion: f64,
    half_extent: f64,
    center: Vec3,
    receiver_radius: f64,
}

impl ChannelState {
    /// Release all molecules at the transmitter and, in microscopic enzyme
    /// mode, scatter enzymes uniformly over the medium.
    pub fn new(config: &ScenarioConfig, repetition: u32) -> Self {
        let mut rng = repetition_rng(config.simulation.master_seed, repetition);
        let h = config.environment.half_extent;
        let n = config.transmission.molecules as usize;
        let molecules = vec![Particle::new(transmitter_position(config), Species::Information); n];
        let enzymes = if simulates_enzymes(config) {
            (0..config.enzyme.enzyme_count)
                .map(|_| {
                    let p = [
                        rng.random_range(-h..h),
                        rng.random_range(-h..h),
                        rng.random_range(-h..h),
                    ];
                    Particle::new(p, Species::Enzyme)
                })
                .collect()
        } else {
            Vec::new()
        };
        let dt = config.simulation.timestep;
        let diffusion = config.environment.diffusion_coefficient;
        let channel = match config.simulation.scenario {
            Scenario::None => Channel::Inert,
            Scenario::Enzyme => Channel::Enzyme(EnzymeStep::new(
                &config.enzyme,
                config.enzyme_decay_rate(),
                diffusion,
                dt,
                config.simulation.enzyme_mode,
            )),
            Scenario::Photolysis => Channel::Photolysis {
                rate: config.photolysis.rate,
                light_time: config.light_time(),
                shells: config.photolysis.shells.clone(),
            },
        };
        ChannelState {
            molecules,
            enzymes,
            rng,
            channel,
            step_index: 0,
            dt,
            diffusion,
            enzyme_diffusion: config.enzyme.enzyme_diffusion,
            half_extent: h,
            center: receiver_center(config),
            receiver_radius: config.geometry.receiver_radius,
        }
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.dt
    }

    pub fn molecules(&self) -> &[Particle] {
        &self.molecules
    }

    pub fn enzymes(&self) -> &[Particle] {
        &self.enzymes
    }

    /// Free information molecules inside the receiver. Pure read.
    pub fn observe(&self) -> u64 {
        observe_receiver(&self.molecules, &self.center, self.receiver_radius)
    }

    pub fn species_counts(&self) -> SpeciesCounts {
        let mut c = SpeciesCounts::default();
        for m in &self.molecules {
            match m.species {
                Species::Information => c.information += 1,
                Species::Complex => c.complex += 1,
                Species::Product => c.product += 1,
                Species::Enzyme => {}
            }
        }
        c
    }

    /// Diffuse, reflect, react; advances time by one timestep.
    pub fn step(&mut self) {
        let t_now = self.time();
        let microscopic =
            matches!(&self.channel, Channel::Enzyme(s) if s.mode == EnzymeMode::Microscopic);
        let (d, de) = (self.diffusion, self.enzyme_diffusion);
        // bound molecules ride on their enzyme in microscopic mode
        let complex_d = if microscopic { 0.0 } else { de };
        brownian_step_by(&mut self.molecules, self.dt, &mut self.rng, |s| match s {
            Species::Information => d,
            Species::Complex => complex_d,
            _ => 0.0,
        });
        reflect_boundary(&mut self.molecules, self.half_extent);
        if microscopic {
            brownian_step(&mut self.enzymes, de, self.dt, &mut self.rng);
            reflect_boundary(&mut self.enzymes, self.half_extent);
            for m in self.molecules.iter_mut() {
                if let (Species::Complex, Some(e)) = (m.species, m.partner) {
                    m.position = self.enzymes[e as usize].position;
                }
            }
        }
        match &self.channel {
            Channel::Inert => {}
            Channel::Enzyme(step) => enzyme_reaction_step(
                &mut self.molecules,
                &mut self.enzymes,
                step,
                self.half_extent,
                &mut self.rng,
            ),
            Channel::Photolysis {
                rate,
                light_time,
                shells,
            } => photolysis_step(
                &mut self.molecules,
                *rate,
                shells,
                *light_time,
                t_now,
                self.dt,
                &self.center,
                &mut self.rng,
            ),
        }
        self.step_index += 1;
    }
}

/// Particle-steps needed to run every repetition of `config`.
pub fn particle_steps(config: &ScenarioConfig) -> u128 {
    let mut particles = u128::from(config.transmission.molecules);
    if simulates_enzymes(config) {
        particles += u128::from(config.enzyme.enzyme_count);
    }
    particles
        * u128::from(config.simulation.total_steps())
        * u128::from(config.simulation.repetitions)
}

/// Config field that contributes most to the particle-step cost, measured
/// against a desk-sized reference run.
fn limiting_parameter(config: &ScenarioConfig) -> &'static str {
    let sim = &config.simulation;
    let mut candidates = vec![
        ("simulation.timestep", sim.total_steps() as f64 / 1e3),
        (
            "transmission.molecules",
            config.transmission.molecules as f64 / 1e4,
        ),
        ("simulation.repetitions", f64::from(sim.repetitions) / 100.0),
    ];
    if simulates_enzymes(config) {
        candidates.push((
            "enzyme.enzyme_count",
            config.enzyme.enzyme_count as f64 / 1e4,
        ));
    }
    candidates
        .into_iter()
        .fold(("simulation.timestep", f64::NEG_INFINITY), |best, c| {
            if c.1 > best.1 {
                c
            } else {
                best
            }
        })
        .0
}

/// Runs repetitions under a particle-step ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    pub budget: u128,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Simulator {
    pub fn new(budget: u128) -> Self {
        Simulator { budget }
    }

    fn check(&self, config: &ScenarioConfig, reps: u128) -> Result<()> {
        let v = config.validate();
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }
        let required = particle_steps(config) / u128::from(config.simulation.repetitions) * reps;
        if required > self.budget {
            return Err(Error::BudgetExceeded {
                required,
                ceiling: self.budget,
                limiting: limiting_parameter(config),
            });
        }
        Ok(())
    }

    /// Check the config and the budget for a full run without simulating.
    pub fn preflight(&self, config: &ScenarioConfig) -> Result<()> {
        self.check(config, u128::from(config.simulation.repetitions))
    }

    pub fn run_impulse(
        &self,
        config: &ScenarioConfig,
        repetition: u32,
    ) -> Result<ObservationSeries> {
        self.check(config, 1)?;
        Ok(simulate(config, repetition))
    }

    /// All repetitions in index order, spread over `workers` threads.
    pub fn run_all(
        &self,
        config: &ScenarioConfig,
        workers: usize,
    ) -> Result<Vec<ObservationSeries>> {
        self.preflight(config)?;
        let reps = config.simulation.repetitions;
        Ok(run_reps(config, reps, workers))
    }

    pub fn run_aggregated(
        &self,
        config: &ScenarioConfig,
        workers: usize,
    ) -> Result<AggregatedSeries> {
        aggregate(&self.run_all(config, workers)?)
    }
}

#[cfg(feature = "parallel")]
fn run_reps(config: &ScenarioConfig, reps: u32, workers: usize) -> Vec<ObservationSeries> {
    use rayon::prelude::*;
    if workers <= 1 {
        return (0..reps).map(|r| simulate(config, r)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| {
            (0..reps)
                .into_par_iter()
                .map(|r| simulate(config, r))
                .collect()
        }),
        Err(_) => (0..reps).map(|r| simulate(config, r)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_reps(config: &ScenarioConfig, reps: u32, _workers: usize) -> Vec<ObservationSeries> {
    (0..reps).map(|r| simulate(config, r)).collect()
}

fn simulate(config: &ScenarioConfig, repetition: u32) -> ObservationSeries {
    let sim = &config.simulation;
    let mut state = ChannelState::new(config, repetition);
    let mut counts = Vec::with_capacity(sim.sample_count() as usize + 1);
    counts.push(state.observe());
    for _ in 0..sim.sample_count() {
        for _ in 0..sim.steps_per_sample() {
            state.step();
        }
        counts.push(state.observe());
    }
    ObservationSeries {
        sample_times: sim.sample_times(),
        counts,
        repetition_index: repetition,
        seed_used: sim.master_seed,
    }
}

/// One repetition under the default budget.
pub fn run_impulse(config: &ScenarioConfig, repetition: u32) -> Result<ObservationSeries> {
    Simulator::default().run_impulse(config, repetition)
}
