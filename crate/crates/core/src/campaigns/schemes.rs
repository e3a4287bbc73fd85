//! Gate schemes and the parameter sets used throughout the campaigns.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::metrics::{reference_two_qubit_input, uniform_input, GateTarget};
use crate::system::{DriveKind, DriveSpec, InteractionSpec, NoiseSpec, Scenario};
use crate::units::mhz;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// `Ωm = 2√3 Ω2`: cyclic Rabi and Raman transitions.
    Cyclic,
    /// `Ωm ≫ 2Ω2`: strong modulated control drive.
    Strong,
    /// Strong control drive plus a frequency-modulated target (LZS).
    Lzs,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Cyclic, Scheme::Strong, Scheme::Lzs];

    pub fn number(self) -> u8 {
        match self {
            Scheme::Cyclic => 1,
            Scheme::Strong => 2,
            Scheme::Lzs => 3,
        }
    }

    /// Nominal gate time in units of `1/Ω2`.
    pub fn gate_time_factor(self) -> f64 {
        match self {
            Scheme::Cyclic | Scheme::Strong => 2.0 * PI,
            Scheme::Lzs => 8.0 * PI,
        }
    }
}

/// Target-detuning modulation in units of `Ω2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LzsParams {
    pub delta0: f64,
    pub delta_bar: f64,
    pub omega_bar: f64,
}

impl Default for LzsParams {
    fn default() -> Self {
        Self { delta0: 5.0, delta_bar: 6.0, omega_bar: 0.5 }
    }
}

/// Drive and interaction parameters, all as `f/2π` in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateParams {
    pub omega2_mhz: f64,
    /// Modulated control amplitude for the strong and LZS schemes; the cyclic
    /// scheme always uses `2√3 Ω2`.
    pub omega_m_mhz: f64,
    pub v_mhz: f64,
    pub mod_freq_mhz: f64,
    #[serde(default)]
    pub lzs: LzsParams,
}

impl GateParams {
    /// `Ω2/2π = 0.1 MHz`, `Ωm = 100Ω2`, `V = ω = 500Ω2`.
    pub fn reference() -> Self {
        Self { omega2_mhz: 0.1, omega_m_mhz: 10.0, v_mhz: 50.0, mod_freq_mhz: 50.0, lzs: LzsParams::default() }
    }

    /// `Ω2/2π = 0.1 MHz`, `Ωm/2π = 10 MHz`, `V = ω` at `v_mhz`.
    pub fn slow(v_mhz: f64) -> Self {
        Self { v_mhz, mod_freq_mhz: v_mhz, ..Self::reference() }
    }

    /// `V/2π = 467 MHz`, `Ωm/2π = 80 MHz` with the given `Ω2/2π`.
    pub fn fast(omega2_mhz: f64) -> Self {
        Self { omega2_mhz, omega_m_mhz: 80.0, v_mhz: 467.0, mod_freq_mhz: 467.0, lzs: LzsParams::default() }
    }

    pub fn omega2(&self) -> f64 {
        mhz(self.omega2_mhz)
    }

    pub fn omega_m(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Cyclic => 2.0 * 3f64.sqrt() * self.omega2(),
            Scheme::Strong | Scheme::Lzs => mhz(self.omega_m_mhz),
        }
    }

    /// Nominal gate time in µs.
    pub fn gate_time(&self, scheme: Scheme) -> f64 {
        scheme.gate_time_factor() / self.omega2()
    }

    pub fn control_drive(&self, atom: usize, scheme: Scheme) -> DriveSpec {
        DriveSpec::new(atom, DriveKind::AmplitudeModulated { omega_max: self.omega_m(scheme), mod_freq: mhz(self.mod_freq_mhz) })
    }

    pub fn target_drive(&self, atom: usize, scheme: Scheme) -> DriveSpec {
        let o2 = self.omega2();
        let kind = match scheme {
            Scheme::Lzs => DriveKind::FrequencyModulated {
                rabi: o2,
                delta0: self.lzs.delta0 * o2,
                delta_bar: self.lzs.delta_bar * o2,
                omega_bar: self.lzs.omega_bar * o2,
            },
            _ => DriveKind::Constant { rabi: o2 },
        };
        DriveSpec::new(atom, kind)
    }
}

/// Two-atom CZ scenario (control 0, target 1) with the reference input state.
pub fn two_qubit(scheme: Scheme, p: &GateParams) -> Scenario {
    Scenario {
        n_atoms: 2,
        drives: vec![p.control_drive(0, scheme), p.target_drive(1, scheme)],
        interactions: InteractionSpec::explicit([((0, 1), mhz(p.v_mhz))]),
        noise: NoiseSpec::default(),
        level_shifts: Vec::new(),
        initial: reference_two_qubit_input(),
        t_final: p.gate_time(scheme),
        target: GateTarget::Cz,
        seed: 0,
        blockade_cutoff: None,
    }
}

/// `n`-atom phase gate: atoms `0..n-1` are controls, `n-1` the target.
/// `control_couplings[k]` multiplies `V` for the `k`-th control pair in
/// lexicographic order; every control-target pair has strength `V`.
pub fn multi_qubit(n: usize, scheme: Scheme, p: &GateParams, control_couplings: &[f64]) -> Scenario {
    let v = mhz(p.v_mhz);
    let mut pairs = Vec::new();
    let mut k = 0;
    for i in 0..n - 1 {
        for j in i + 1..n - 1 {
            pairs.push(((i, j), v * control_couplings.get(k).copied().unwrap_or(1.0)));
            k += 1;
        }
        pairs.push(((i, n - 1), v));
    }
    let mut drives: Vec<DriveSpec> = (0..n - 1).map(|j| p.control_drive(j, scheme)).collect();
    drives.push(p.target_drive(n - 1, scheme));
    Scenario {
        n_atoms: n,
        drives,
        interactions: InteractionSpec::explicit(pairs),
        noise: NoiseSpec::default(),
        level_shifts: Vec::new(),
        initial: uniform_input(n),
        t_final: p.gate_time(scheme),
        target: GateTarget::Phase { n },
        seed: 0,
        blockade_cutoff: None,
    }
}

/// Three-pulse π (control) – 2π (target) – π (control) blockade gate with
/// resonant square pulses of Rabi frequency `omega_r_mhz`.
pub fn blockade_gate(omega_r_mhz: f64, v_mhz: f64) -> Scenario {
    let om = mhz(omega_r_mhz);
    let pi_t = PI / om;
    let control = DriveKind::PulseTrain { rabi: om, windows: vec![(0.0, pi_t), (3.0 * pi_t, 4.0 * pi_t)] };
    let target = DriveKind::PulseTrain { rabi: om, windows: vec![(pi_t, 3.0 * pi_t)] };
    Scenario {
        n_atoms: 2,
        drives: vec![DriveSpec::new(0, control), DriveSpec::new(1, target)],
        interactions: InteractionSpec::explicit([((0, 1), mhz(v_mhz))]),
        noise: NoiseSpec::default(),
        level_shifts: Vec::new(),
        initial: reference_two_qubit_input(),
        t_final: 4.0 * pi_t,
        target: GateTarget::Diagonal { signs: vec![1, -1, -1, -1] },
        seed: 0,
        blockade_cutoff: None,
    }
}
