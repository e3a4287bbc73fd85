//! Declarative gate scenarios and assembly of their Hamiltonians and
//! collapse operators.

mod assemble;
mod geometry;
mod two_photon;

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::algebra::{Level, LevelScheme, Space, StateVector};
use crate::error::{Error, Result};
use crate::metrics::GateTarget;
use crate::units::{per_second, K_B};
use crate::C64;

pub use assemble::{
    assemble_collapse_ops, assemble_hamiltonian, blockade_subspace, collapse_operators, decay_rates,
};
pub use geometry::{ddf_coefficient, ddf_term, superatom_layout, vdw_gradient, vdw_strength};
pub use two_photon::{
    reduce_two_photon, Role, StarkTerm, TwoPhotonInputs, TwoPhotonReduction, MIN_DETUNING_RATIO,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriveKind {
    Constant { rabi: f64 },
    /// `omega_max * cos(mod_freq * t)`
    AmplitudeModulated { omega_max: f64, mod_freq: f64 },
    /// Constant `rabi` with detuning `delta0 + delta_bar * cos(omega_bar * t)`.
    FrequencyModulated { rabi: f64, delta0: f64, delta_bar: f64, omega_bar: f64 },
    /// Square pulses of amplitude `rabi` inside `[start, end)` windows.
    PulseTrain { rabi: f64, windows: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub atom: usize,
    #[serde(flatten)]
    pub kind: DriveKind,
    #[serde(default)]
    pub doppler_shift: f64,
}

impl DriveSpec {
    pub fn new(atom: usize, kind: DriveKind) -> Self {
        Self { atom, kind, doppler_shift: 0.0 }
    }

    pub fn validate(&self, n_atoms: usize) -> Result<()> {
        if self.atom >= n_atoms {
            return Err(Error::AtomOutOfRange { index: self.atom, n_atoms });
        }
        let finite = |name: &'static str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be finite, got {x}")))
            }
        };
        finite("doppler_shift", self.doppler_shift)?;
        match &self.kind {
            DriveKind::Constant { rabi } => finite("rabi", *rabi),
            DriveKind::AmplitudeModulated { omega_max, mod_freq } => {
                finite("omega_max", *omega_max)?;
                if !(*mod_freq > 0.0 && mod_freq.is_finite()) {
                    return Err(Error::param("mod_freq", format!("must be positive, got {mod_freq}")));
                }
                Ok(())
            }
            DriveKind::FrequencyModulated { rabi, delta0, delta_bar, omega_bar } => {
                finite("rabi", *rabi)?;
                finite("delta0", *delta0)?;
                finite("delta_bar", *delta_bar)?;
                if !(*omega_bar > 0.0 && omega_bar.is_finite()) {
                    return Err(Error::param("omega_bar", format!("must be positive, got {omega_bar}")));
                }
                Ok(())
            }
            DriveKind::PulseTrain { rabi, windows } => {
                finite("rabi", *rabi)?;
                if windows.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
                    return Err(Error::param("windows", "each window needs finite start < end"));
                }
                Ok(())
            }
        }
    }

    /// Largest amplitude of the coupling envelope.
    pub fn peak_rabi(&self) -> f64 {
        match &self.kind {
            DriveKind::Constant { rabi }
            | DriveKind::FrequencyModulated { rabi, .. }
            | DriveKind::PulseTrain { rabi, .. } => rabi.abs(),
            DriveKind::AmplitudeModulated { omega_max, .. } => omega_max.abs(),
        }
    }
}

/// Linearized correction for a pair displaced from its ideal separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdfShift {
    pub pair: (usize, usize),
    pub c6: f64,
    pub d_ideal: f64,
    pub d_actual: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InteractionSpec {
    /// Keys are ordered `(i, j)` with `i < j`.
    pub pairs: BTreeMap<(usize, usize), f64>,
    pub ddf: Option<DdfShift>,
}

impl InteractionSpec {
    pub fn explicit(pairs: impl IntoIterator<Item = ((usize, usize), f64)>) -> Self {
        let pairs = pairs.into_iter().map(|((i, j), v)| ((i.min(j), i.max(j)), v)).collect();
        Self { pairs, ddf: None }
    }

    /// Pair strengths `C6/|x_i - x_j|^6` from positions in µm (each a 3-vector).
    pub fn from_positions(c6: f64, positions: &[[f64; 3]]) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                let d = (0..3).map(|k| (positions[i][k] - positions[j][k]).powi(2)).sum::<f64>().sqrt();
                pairs.insert((i, j), vdw_strength(c6, d)?);
            }
        }
        Ok(Self { pairs, ddf: None })
    }

    pub fn strength(&self, i: usize, j: usize) -> f64 {
        self.pairs.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let pairs = self.pairs.iter().map(|(&k, &v)| (k, v * factor)).collect();
        Self { pairs, ddf: self.ddf }
    }

    fn validate(&self, n_atoms: usize) -> Result<()> {
        for (&(i, j), &v) in &self.pairs {
            if i == j {
                return Err(Error::param("interactions", format!("self-interaction on atom {i}")));
            }
            if j >= n_atoms {
                return Err(Error::AtomOutOfRange { index: j, n_atoms });
            }
            if !v.is_finite() {
                return Err(Error::param("interactions", format!("V_{i}{j} is not finite")));
            }
        }
        if let Some(ddf) = &self.ddf {
            let (i, j) = ddf.pair;
            if i == j || i.max(j) >= n_atoms {
                return Err(Error::param("ddf.pair", format!("invalid pair ({i}, {j})")));
            }
            if !(ddf.d_ideal > 0.0) {
                return Err(Error::param("ddf.d_ideal", "must be positive"));
            }
            if !(ddf.d_actual > 0.0) {
                return Err(Error::param("ddf.d_actual", "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayNoise {
    /// Rydberg lifetime in µs.
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DopplerNoise {
    /// Atomic temperature, K.
    pub temperature: f64,
    /// Effective wave vector, 1/m.
    pub k_eff: f64,
    /// Atomic mass, kg.
    pub mass: f64,
}

impl DopplerNoise {
    pub fn rb87(temperature: f64) -> Self {
        Self { temperature, k_eff: crate::units::K_EFF_RB87, mass: crate::units::RB87_MASS }
    }

    /// `k_eff * sqrt(k_B T / m)` in rad/µs.
    pub fn sigma(&self) -> f64 {
        per_second(self.k_eff * (K_B * self.temperature / self.mass).sqrt())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub decay: Option<DecayNoise>,
    /// Standard deviation of the `ddf` pair separation, µm.
    #[serde(default)]
    pub ddf_sigma: Option<f64>,
    #[serde(default)]
    pub doppler: Option<DopplerNoise>,
}

impl NoiseSpec {
    pub fn is_stochastic(&self) -> bool {
        self.ddf_sigma.is_some_and(|s| s > 0.0) || self.doppler.is_some_and(|d| d.temperature > 0.0)
    }

    fn validate(&self) -> Result<()> {
        if let Some(d) = self.decay {
            if !(d.tau > 0.0) {
                return Err(Error::param("decay.tau", format!("must be positive, got {}", d.tau)));
            }
        }
        if let Some(s) = self.ddf_sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::param("ddf_sigma", format!("must be non-negative, got {s}")));
            }
        }
        if let Some(d) = self.doppler {
            if !(d.temperature >= 0.0 && d.k_eff > 0.0 && d.mass > 0.0) {
                return Err(Error::param("doppler", "temperature must be non-negative, k_eff and mass positive"));
            }
        }
        Ok(())
    }
}

/// Extra diagonal energy `offset + cos2_amplitude * cos^2(frequency t)` on one
/// level of one atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelShift {
    pub atom: usize,
    pub level: Level,
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub cos2_amplitude: f64,
    #[serde(default)]
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n_atoms: usize,
    pub drives: Vec<DriveSpec>,
    pub interactions: InteractionSpec,
    pub noise: NoiseSpec,
    pub level_shifts: Vec<LevelShift>,
    /// Amplitudes over the computational basis in `|0..0>, |0..01>, ...` order.
    pub initial: Vec<C64>,
    pub t_final: f64,
    pub target: GateTarget,
    pub seed: u64,
    /// Basis states whose static interaction energy exceeds this are dropped.
    pub blockade_cutoff: Option<f64>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::InvalidScenario("no atoms".into()));
        }
        for d in &self.drives {
            d.validate(self.n_atoms)?;
        }
        self.interactions.validate(self.n_atoms)?;
        self.noise.validate()?;
        if self.noise.ddf_sigma.is_some() && self.interactions.ddf.is_none() {
            return Err(Error::InvalidScenario("ddf_sigma given without a ddf pair".into()));
        }
        for s in &self.level_shifts {
            if s.atom >= self.n_atoms {
                return Err(Error::AtomOutOfRange { index: s.atom, n_atoms: self.n_atoms });
            }
        }
        let comp = 1usize << self.n_atoms;
        if self.initial.len() != comp {
            return Err(Error::DimensionMismatch { expected: comp, found: self.initial.len() });
        }
        let norm: f64 = self.initial.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::param("t_final", format!("must be positive, got {}", self.t_final)));
        }
        if self.target.n_qubits() != self.n_atoms {
            return Err(Error::InvalidScenario(format!(
                "target acts on {} qubits but the scenario has {} atoms",
                self.target.n_qubits(),
                self.n_atoms
            )));
        }
        if let Some(c) = self.blockade_cutoff {
            if !(c > 0.0) {
                return Err(Error::param("blockade_cutoff", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn level_scheme(&self) -> LevelScheme {
        if self.noise.decay.is_some() {
            LevelScheme::with_leak()
        } else {
            LevelScheme::three_level()
        }
    }

    pub fn space(&self) -> Space {
        Space::uniform(self.n_atoms, self.level_scheme())
    }

    pub fn initial_state(&self, space: &Space) -> Result<StateVector<f64>> {
        let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
        for (a, idx) in self.initial.iter().zip(space.computational_indices()) {
            amps[idx] = *a;
        }
        StateVector::new(amps)
    }

    /// Copy with stochastic and dissipative noise removed.
    pub fn noiseless(&self) -> Self {
        let mut s = self.clone();
        s.noise = NoiseSpec::default();
        s
    }

    /// Draws one static-disorder realization: a separation for the DDF pair
    /// and a Doppler detuning per atom. The result carries no stochastic noise.
    pub fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Self> {
        let mut s = self.clone();
        if let (Some(sigma), Some(ddf)) = (self.noise.ddf_sigma, s.interactions.ddf.as_mut()) {
            ddf.d_actual = sample_distance(rng, ddf.d_ideal, sigma)?;
        }
        if let Some(dop) = self.noise.doppler {
            let normal = Normal::new(0.0, dop.sigma()).map_err(|e| Error::param("doppler", e.to_string()))?;
            let shifts: Vec<f64> = (0..self.n_atoms).map(|_| normal.sample(rng)).collect();
            for d in &mut s.drives {
                d.doppler_shift += shifts[d.atom];
            }
        }
        s.noise.ddf_sigma = None;
        s.noise.doppler = None;
        Ok(s)
    }
}

fn sample_distance<R: Rng + ?Sized>(rng: &mut R, mean: f64, sigma: f64) -> Result<f64> {
    if sigma == 0.0 {
        return Ok(mean);
    }
    let normal = Normal::new(mean, sigma).map_err(|e| Error::param("ddf_sigma", e.to_string()))?;
    for _ in 0..1000 {
        let d = normal.sample(rng);
        if d > 0.0 {
            return Ok(d);
        }
    }
    Err(Error::param("ddf_sigma", "could not draw a positive separation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn base() -> Scenario {
        Scenario {
            n_atoms: 2,
            drives: vec![
                DriveSpec::new(0, DriveKind::Constant { rabi: 1.0 }),
                DriveSpec::new(1, DriveKind::Constant { rabi: 1.0 }),
            ],
            interactions: InteractionSpec::explicit([((1, 0), 5.0)]),
            noise: NoiseSpec::default(),
            level_shifts: Vec::new(),
            initial: vec![C64::new(0.5, 0.0); 4],
            t_final: 1.0,
            target: GateTarget::Cz,
            seed: 1,
            blockade_cutoff: None,
        }
    }

    #[test]
    fn doppler_sigma_at_46_microkelvin() {
        let sigma = DopplerNoise::rb87(46e-6).sigma();
        let expected = 8.76e6 * (1.380649e-23 * 46e-6 / 1.44316e-25f64).sqrt() * 1e-6;
        assert!((sigma - expected).abs() < 1e-15);
        assert!((sigma - 0.58).abs() < 0.01);
    }

    #[test]
    fn interaction_keys_are_ordered() {
        let s = base();
        assert_eq!(s.interactions.strength(0, 1), 5.0);
        assert_eq!(s.interactions.strength(1, 0), 5.0);
        let pos = InteractionSpec::from_positions(64.0, &[[0.0; 3], [2.0, 0.0, 0.0]]).unwrap();
        assert_eq!(pos.strength(0, 1), 1.0);
    }

    #[test]
    fn realize_is_seeded_and_clears_noise() {
        let mut s = base();
        s.interactions.ddf = Some(DdfShift { pair: (0, 1), c6: 1.0, d_ideal: 4.8, d_actual: 4.8 });
        s.noise.ddf_sigma = Some(0.1);
        s.noise.doppler = Some(DopplerNoise::rb87(20e-6));
        let a = s.realize(&mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = s.realize(&mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert!(!a.noise.is_stochastic());
        assert_ne!(a.interactions.ddf.unwrap().d_actual, 4.8);
        assert_ne!(a.drives[0].doppler_shift, 0.0);
    }

    #[test]
    fn validation_catches_bad_inputs() {
        assert!(base().validate().is_ok());
        let mut s = base();
        s.initial[0] = C64::new(2.0, 0.0);
        assert!(matches!(s.validate(), Err(Error::NotNormalized(_))));
        let mut s = base();
        s.noise.ddf_sigma = Some(0.1);
        assert!(s.validate().is_err());
        let mut s = base();
        s.noise.decay = Some(DecayNoise { tau: 0.0 });
        assert!(s.validate().is_err());
        let mut s = base();
        s.target = GateTarget::Phase { n: 3 };
        assert!(s.validate().is_err());
    }

    #[test]
    fn leak_level_follows_decay() {
        let mut s = base();
        assert_eq!(s.space().dim(), 9);
        s.noise.decay = Some(DecayNoise { tau: 100.0 });
        assert_eq!(s.space().dim(), 16);
        let psi = s.initial_state(&s.space()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }
}
