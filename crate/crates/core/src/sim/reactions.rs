use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};

use super::particle::{dist2, reflect, Particle, Species, Vec3};
use crate::config::{EnzymeKinetics, EnzymeMode, Shell};

/// `1 - exp(-rate dt)` without cancellation.
#[inline]
pub(crate) fn first_order_probability(rate: f64, dt: f64) -> f64 {
    -(-rate * dt).exp_m1()
}

/// Per-step Michaelis-Menten channel with probabilities precomputed for a
/// fixed timestep.
#[derive(Debug, Clone, PartialEq)]
pub struct EnzymeStep {
    pub mode: EnzymeMode,
    /// Well-mixed only: probability a free molecule binds during one step.
    pub bind_probability: f64,
    /// Microscopic only: Smoluchowski encounter radius.
    pub binding_radius: f64,
    /// Probability a complex resolves (unbinds or degrades) during one step.
    pub resolve_probability: f64,
    /// Fraction of resolutions that are unbinding, `k-1 / (k-1 + k2)`.
    pub unbind_share: f64,
}

impl EnzymeStep {
    pub fn new(
        kinetics: &EnzymeKinetics,
        decay_rate: f64,
        molecule_diffusion: f64,
        dt: f64,
        mode: EnzymeMode,
    ) -> Self {
        let total = kinetics.unbinding_rate + kinetics.degradation_rate;
        EnzymeStep {
            mode,
            bind_probability: match mode {
                EnzymeMode::WellMixed => first_order_probability(decay_rate, dt),
                EnzymeMode::Microscopic => 0.0,
            },
            binding_radius: match mode {
                EnzymeMode::WellMixed => 0.0,
                EnzymeMode::Microscopic => kinetics.binding_radius(molecule_diffusion),
            },
            resolve_probability: first_order_probability(total, dt),
            unbind_share: if total > 0.0 {
                kinetics.unbinding_rate / total
            } else {
                0.0
            },
        }
    }

    /// Release distance of an unbound molecule from its enzyme.
    pub fn release_distance(&self) -> f64 {
        2.0 * self.binding_radius
    }
}

enum Resolution {
    Stay,
    Unbind,
    Degrade,
}

fn resolve<R: Rng + ?Sized>(step: &EnzymeStep, rng: &mut R) -> Resolution {
    if step.resolve_probability <= 0.0 {
        return Resolution::Stay;
    }
    let u: f64 = rng.random();
    if u < step.resolve_probability * step.unbind_share {
        Resolution::Unbind
    } else if u < step.resolve_probability {
        Resolution::Degrade
    } else {
        Resolution::Stay
    }
}

/// One reaction step of the enzyme channel. `enzymes` is only read in
/// microscopic mode. Particles are visited in index order, so the result is a
/// deterministic function of the RNG state.
pub fn enzyme_reaction_step<R: Rng + ?Sized>(
    molecules: &mut [Particle],
    enzymes: &mut [Particle],
    step: &EnzymeStep,
    half_extent: f64,
    rng: &mut R,
) {
    match step.mode {
        EnzymeMode::WellMixed => well_mixed(molecules, step, rng),
        EnzymeMode::Microscopic => microscopic(molecules, enzymes, step, half_extent, rng),
    }
}

fn well_mixed<R: Rng + ?Sized>(molecules: &mut [Particle], step: &EnzymeStep, rng: &mut R) {
    for m in molecules.iter_mut() {
        match m.species {
            Species::Information if step.bind_probability > 0.0 => {
                if rng.random::<f64>() < step.bind_probability {
                    m.species = Species::Complex;
                }
            }
            Species::Complex => match resolve(step, rng) {
                Resolution::Stay => {}
                Resolution::Unbind => m.species = Species::Information,
                Resolution::Degrade => m.species = Species::Product,
            },
            _ => {}
        }
    }
}

fn microscopic<R: Rng + ?Sized>(
    molecules: &mut [Particle],
    enzymes: &mut [Particle],
    step: &EnzymeStep,
    half_extent: f64,
    rng: &mut R,
) {
    for m in molecules.iter_mut() {
        if m.species != Species::Complex {
            continue;
        }
        let e = m.partner.expect("complex without enzyme") as usize;
        match resolve(step, rng) {
            Resolution::Stay => {}
            Resolution::Unbind => {
                let dir: [f64; 3] = UnitSphere.sample(rng);
                let r = step.release_distance();
                let base = enzymes[e].position;
                for k in 0..3 {
                    m.position[k] = reflect(base[k] + r * dir[k], half_extent);
                }
                m.species = Species::Information;
                m.partner = None;
                enzymes[e].partner = None;
            }
            Resolution::Degrade => {
                m.species = Species::Product;
                m.partner = None;
                enzymes[e].partner = None;
            }
        }
    }

    let rb = step.binding_radius;
    if rb <= 0.0 {
        return;
    }
    let grid = CellGrid::new(enzymes, rb);
    let rb2 = rb * rb;
    for (mi, m) in molecules.iter_mut().enumerate() {
        if m.species != Species::Information {
            continue;
        }
        let mut best: Option<(f64, u32)> = None;
        grid.for_neighbors(&m.position, |ei| {
            let e = &enzymes[ei as usize];
            if e.partner.is_some() {
                return;
            }
            let r2 = dist2(&e.position, &m.position);
            if r2 <= rb2 && best.is_none_or(|(b, bi)| r2 < b || (r2 == b && ei < bi)) {
                best = Some((r2, ei));
            }
        });
        if let Some((_, ei)) = best {
            m.species = Species::Complex;
            m.partner = Some(ei);
            m.position = enzymes[ei as usize].position;
            enzymes[ei as usize].partner = Some(mi as u32);
        }
    }
}

/// Uniform hash grid over enzyme positions with cell size equal to the search
/// radius, so all candidates lie in the 27 surrounding cells.
struct CellGrid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<u32>>,
}

impl CellGrid {
    fn new(enzymes: &[Particle], cell: f64) -> Self {
        let mut cells: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        for (i, e) in enzymes.iter().enumerate() {
            if e.partner.is_none() {
                cells
                    .entry(Self::key(&e.position, cell))
                    .or_default()
                    .push(i as u32);
            }
        }
        CellGrid { cell, cells }
    }

    fn key(p: &Vec3, cell: f64) -> [i64; 3] {
        [
            (p[0] / cell).floor() as i64,
            (p[1] / cell).floor() as i64,
            (p[2] / cell).floor() as i64,
        ]
    }

    fn for_neighbors(&self, p: &Vec3, mut f: impl FnMut(u32)) {
        let k = Self::key(p, self.cell);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        list.iter().for_each(|&i| f(i));
                    }
                }
            }
        }
    }
}

/// Weight of the light field at distance `rho` from the receiver center.
pub fn shell_weight(shells: &[Shell], rho: f64) -> f64 {
    shells
        .iter()
        .find(|s| rho <= s.outer_radius)
        .map_or(0.0, |s| s.weight)
}

/// Light-gated first-order degradation of free information molecules.
#[allow(clippy::too_many_arguments)]
pub fn photolysis_step<R: Rng + ?Sized>(
    molecules: &mut [Particle],
    rate: f64,
    shells: &[Shell],
    light_time: f64,
    t_now: f64,
    dt: f64,
    center: &Vec3,
    rng: &mut R,
) {
    if t_now < light_time || rate <= 0.0 {
        return;
    }
    let probs: Vec<f64> = shells
        .iter()
        .map(|s| first_order_probability(rate * s.weight, dt))
        .collect();
    let radii2: Vec<f64> = shells
        .iter()
        .map(|s| s.outer_radius * s.outer_radius)
        .collect();
    for m in molecules.iter_mut() {
        if m.species != Species::Information {
            continue;
        }
        let r2 = dist2(&m.position, center);
        let Some(i) = radii2.iter().position(|&s| r2 <= s) else {
            continue;
        };
        let p = probs[i];
        if p > 0.0 && rng.random::<f64>() < p {
            m.species = Species::Product;
        }
    }
}
