use rand::Rng;
use rand_distr::StandardNormal;

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    Information,
    Enzyme,
    /// Information molecule bound to an enzyme; not visible to the receiver.
    Complex,
    /// Degraded molecule. Never moves, never counted.
    Product,
}

impl Species {
    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub position: Vec3,
    pub species: Species,
    /// Binding partner index in the other population (microscopic enzymes only).
    pub partner: Option<u32>,
}

impl Particle {
    pub fn new(position: Vec3, species: Species) -> Self {
        Particle {
            position,
            species,
            partner: None,
        }
    }

    pub fn alive(&self) -> bool {
        self.species != Species::Product
    }
}

pub(crate) fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

/// Gaussian displacement with per-axis standard deviation `sqrt(2 D dt)` for
/// every live particle.
pub fn brownian_step<R: Rng + ?Sized>(
    particles: &mut [Particle],
    diffusion: f64,
    dt: f64,
    rng: &mut R,
) {
    brownian_step_by(particles, dt, rng, |_| diffusion);
}

/// Like [`brownian_step`] with a per-species diffusion coefficient. Particles
/// whose coefficient is zero draw no random numbers.
pub fn brownian_step_by<R: Rng + ?Sized>(
    particles: &mut [Particle],
    dt: f64,
    rng: &mut R,
    diffusion_of: impl Fn(Species) -> f64,
) {
    let mut sigma = [0.0; 4];
    for s in [Species::Information, Species::Enzyme, Species::Complex] {
        sigma[s.index()] = (2.0 * diffusion_of(s) * dt).sqrt();
    }
    for p in particles.iter_mut() {
        let s = sigma[p.species.index()];
        if s > 0.0 {
            for x in p.position.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *x += s * z;
            }
        }
    }
}

/// Mirror coordinates back into `[-half_extent, half_extent]`.
pub fn reflect_boundary(particles: &mut [Particle], half_extent: f64) {
    for p in particles.iter_mut() {
        for x in p.position.iter_mut() {
            *x = reflect(*x, half_extent);
        }
    }
}

#[inline]
pub(crate) fn reflect(mut x: f64, bound: f64) -> f64 {
    loop {
        if x > bound {
            x = 2.0 * bound - x;
        } else if x < -bound {
            x = -2.0 * bound - x;
        } else {
            return x;
        }
    }
}

/// Free information molecules inside the closed ball around `center`.
pub fn observe_receiver(particles: &[Particle], center: &Vec3, radius: f64) -> u64 {
    let r2 = radius * radius;
    particles
        .iter()
        .filter(|p| p.species == Species::Information && dist2(&p.position, center) <= r2)
        .count() as u64
}
