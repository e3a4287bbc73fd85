//! Reduction of the two-photon ladder `|1> - |p> - |r>` to an effective
//! single-photon coupling.

use serde::{Deserialize, Serialize};

use crate::algebra::Level;
use crate::system::LevelShift;

/// Minimum intermediate-state detuning relative to the Rabi inputs.
pub const MIN_DETUNING_RATIO: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonInputs {
    /// Lower-leg Rabi frequency on the control atom.
    pub omega_1p: f64,
    /// Peak of the amplitude-modulated upper leg on the control atom.
    pub omega_m_tilde: f64,
    pub delta1: f64,
    pub omega_2p: f64,
    pub omega_2r: f64,
    pub delta2: f64,
    pub include_stark: bool,
}

/// Which atom a Stark term sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Control,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarkTerm {
    pub role: Role,
    pub level: Level,
    pub amplitude: f64,
    /// Term follows `cos^2(omega t)` of the modulated control field.
    pub modulated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonReduction {
    pub omega_m: f64,
    pub omega2: f64,
    pub stark: Vec<StarkTerm>,
    pub warnings: Vec<String>,
}

pub fn reduce_two_photon(inp: &TwoPhotonInputs) -> TwoPhotonReduction {
    let mut warnings = Vec::new();
    let legs = [
        ("delta1", inp.delta1, inp.omega_1p.abs().max(inp.omega_m_tilde.abs())),
        ("delta2", inp.delta2, inp.omega_2p.abs().max(inp.omega_2r.abs())),
    ];
    for (name, delta, rabi) in legs {
        if rabi > 0.0 && delta.abs() < MIN_DETUNING_RATIO * rabi {
            warnings.push(format!(
                "{name} is only {:.2}x the largest Rabi input; adiabatic elimination is questionable",
                delta.abs() / rabi
            ));
        }
    }

    let omega_m = inp.omega_m_tilde * inp.omega_1p / (2.0 * inp.delta1);
    let omega2 = inp.omega_2r * inp.omega_2p / (2.0 * inp.delta2);
    let stark = if inp.include_stark {
        vec![
            StarkTerm { role: Role::Control, level: Level::G1, amplitude: inp.omega_1p.powi(2) / (4.0 * inp.delta1), modulated: false },
            StarkTerm { role: Role::Control, level: Level::Ryd, amplitude: inp.omega_m_tilde.powi(2) / (4.0 * inp.delta1), modulated: true },
            StarkTerm { role: Role::Target, level: Level::G1, amplitude: inp.omega_2p.powi(2) / (4.0 * inp.delta2), modulated: false },
            StarkTerm { role: Role::Target, level: Level::Ryd, amplitude: inp.omega_2r.powi(2) / (4.0 * inp.delta2), modulated: false },
        ]
    } else {
        Vec::new()
    };
    TwoPhotonReduction { omega_m, omega2, stark, warnings }
}

impl TwoPhotonReduction {
    /// Level shifts for the given control atoms and target, with the control
    /// modulation frequency `mod_freq`.
    pub fn level_shifts(&self, controls: &[usize], target: usize, mod_freq: f64) -> Vec<LevelShift> {
        let mut out = Vec::new();
        for term in &self.stark {
            let atoms: Vec<usize> = match term.role {
                Role::Control => controls.to_vec(),
                Role::Target => vec![target],
            };
            for atom in atoms {
                out.push(if term.modulated {
                    LevelShift { atom, level: term.level, offset: 0.0, cos2_amplitude: term.amplitude, frequency: mod_freq }
                } else {
                    LevelShift { atom, level: term.level, offset: term.amplitude, cos2_amplitude: 0.0, frequency: 0.0 }
                });
            }
        }
        out
    }
}
