//! JSON configuration documents and the built-in preset library.
//!
//! Config units: frequencies as `f/2π` in MHz, times in µs, distances in µm,
//! temperatures in µK.

use serde::{Deserialize, Serialize};

use crate::algebra::Level;
use crate::campaigns::{superatom_scenario, CampaignSpec, GateParams, Scheme};
use crate::error::{Error, Result};
use crate::metrics::{reference_two_qubit_input, uniform_input, GateTarget, SolverSettings};
use crate::system::{
    superatom_layout, DdfShift, DecayNoise, DopplerNoise, DriveKind, DriveSpec, InteractionSpec, LevelShift, NoiseSpec,
    Scenario,
};
use crate::units::{mhz, to_mhz, K_EFF_RB87, RB87_MASS};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriveConfig {
    Constant { atom: usize, rabi_mhz: f64, #[serde(default)] doppler_shift_mhz: f64 },
    AmplitudeModulated { atom: usize, omega_max_mhz: f64, mod_freq_mhz: f64, #[serde(default)] doppler_shift_mhz: f64 },
    FrequencyModulated {
        atom: usize,
        rabi_mhz: f64,
        delta0_mhz: f64,
        delta_bar_mhz: f64,
        omega_bar_mhz: f64,
        #[serde(default)]
        doppler_shift_mhz: f64,
    },
    PulseTrain { atom: usize, rabi_mhz: f64, windows_us: Vec<(f64, f64)>, #[serde(default)] doppler_shift_mhz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub pair: (usize, usize),
    pub v_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InteractionConfig {
    Explicit(Vec<PairConfig>),
    C6Geometry { c6_mhz: f64, positions_um: Vec<[f64; 3]> },
    /// Controls at `-R, 0, R` and the target at `d_target_um`.
    Superatom { c6_mhz: f64, radius_um: f64, d_target_um: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdfConfig {
    pub pair: (usize, usize),
    pub c6_mhz: f64,
    pub d_ideal_um: f64,
    /// Defaults to `d_ideal_um`.
    #[serde(default)]
    pub d_actual_um: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DopplerConfig {
    pub temperature_uk: f64,
    #[serde(default = "default_k_eff")]
    pub k_eff_per_m: f64,
    #[serde(default = "default_mass")]
    pub mass_kg: f64,
}

fn default_k_eff() -> f64 {
    K_EFF_RB87
}

fn default_mass() -> f64 {
    RB87_MASS
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default)]
    pub decay_tau_us: Option<f64>,
    #[serde(default)]
    pub ddf_sigma_um: Option<f64>,
    #[serde(default)]
    pub doppler: Option<DopplerConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateConfig {
    /// `√0.4|00> + √0.3|01> + √0.2|10> + √0.1|11>`.
    Reference,
    /// Equal superposition of all computational states.
    Uniform,
    /// `(re, im)` pairs over the computational basis; normalized on load.
    Amplitudes(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelShiftConfig {
    pub atom: usize,
    pub level: Level,
    #[serde(default)]
    pub offset_mhz: f64,
    #[serde(default)]
    pub cos2_amplitude_mhz: f64,
    #[serde(default)]
    pub frequency_mhz: f64,
}

/// One gate simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub atoms: usize,
    pub drives: Vec<DriveConfig>,
    pub interactions: InteractionConfig,
    #[serde(default)]
    pub ddf: Option<DdfConfig>,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub level_shifts: Vec<LevelShiftConfig>,
    pub initial_state: InitialStateConfig,
    pub t_final_us: f64,
    pub target: GateTarget,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub blockade_cutoff_mhz: Option<f64>,
    /// Number of evenly spaced output samples on `[0, t_final]`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Window in units of `2π/Ω` (`Ω` = `plateau_rabi_mhz`) over which the
    /// minimum fidelity is reported.
    #[serde(default)]
    pub plateau_cycles: Option<(f64, f64)>,
    #[serde(default)]
    pub plateau_rabi_mhz: Option<f64>,
    #[serde(default)]
    pub solver: Option<SolverSettings>,
}

fn default_samples() -> usize {
    201
}

impl DriveConfig {
    fn to_spec(&self) -> DriveSpec {
        let (atom, kind, shift) = match self {
            DriveConfig::Constant { atom, rabi_mhz, doppler_shift_mhz } => {
                (*atom, DriveKind::Constant { rabi: mhz(*rabi_mhz) }, *doppler_shift_mhz)
            }
            DriveConfig::AmplitudeModulated { atom, omega_max_mhz, mod_freq_mhz, doppler_shift_mhz } => (
                *atom,
                DriveKind::AmplitudeModulated { omega_max: mhz(*omega_max_mhz), mod_freq: mhz(*mod_freq_mhz) },
                *doppler_shift_mhz,
            ),
            DriveConfig::FrequencyModulated { atom, rabi_mhz, delta0_mhz, delta_bar_mhz, omega_bar_mhz, doppler_shift_mhz } => (
                *atom,
                DriveKind::FrequencyModulated {
                    rabi: mhz(*rabi_mhz),
                    delta0: mhz(*delta0_mhz),
                    delta_bar: mhz(*delta_bar_mhz),
                    omega_bar: mhz(*omega_bar_mhz),
                },
                *doppler_shift_mhz,
            ),
            DriveConfig::PulseTrain { atom, rabi_mhz, windows_us, doppler_shift_mhz } => (
                *atom,
                DriveKind::PulseTrain { rabi: mhz(*rabi_mhz), windows: windows_us.clone() },
                *doppler_shift_mhz,
            ),
        };
        DriveSpec { atom, kind, doppler_shift: mhz(shift) }
    }

    fn from_spec(d: &DriveSpec) -> Self {
        let atom = d.atom;
        let doppler_shift_mhz = to_mhz(d.doppler_shift);
        match &d.kind {
            DriveKind::Constant { rabi } => DriveConfig::Constant { atom, rabi_mhz: to_mhz(*rabi), doppler_shift_mhz },
            DriveKind::AmplitudeModulated { omega_max, mod_freq } => DriveConfig::AmplitudeModulated {
                atom,
                omega_max_mhz: to_mhz(*omega_max),
                mod_freq_mhz: to_mhz(*mod_freq),
                doppler_shift_mhz,
            },
            DriveKind::FrequencyModulated { rabi, delta0, delta_bar, omega_bar } => DriveConfig::FrequencyModulated {
                atom,
                rabi_mhz: to_mhz(*rabi),
                delta0_mhz: to_mhz(*delta0),
                delta_bar_mhz: to_mhz(*delta_bar),
                omega_bar_mhz: to_mhz(*omega_bar),
                doppler_shift_mhz,
            },
            DriveKind::PulseTrain { rabi, windows } => {
                DriveConfig::PulseTrain { atom, rabi_mhz: to_mhz(*rabi), windows_us: windows.clone(), doppler_shift_mhz }
            }
        }
    }
}

impl ScenarioConfig {
    /// Resolves the config into a validated scenario in internal units.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let mut interactions = match &self.interactions {
            InteractionConfig::Explicit(pairs) => InteractionSpec::explicit(pairs.iter().map(|p| (p.pair, mhz(p.v_mhz)))),
            InteractionConfig::C6Geometry { c6_mhz, positions_um } => {
                if positions_um.len() != self.atoms {
                    return Err(Error::Config(format!(
                        "interactions.c6_geometry: {} positions for {} atoms",
                        positions_um.len(),
                        self.atoms
                    )));
                }
                InteractionSpec::from_positions(mhz(*c6_mhz), positions_um)?
            }
            InteractionConfig::Superatom { c6_mhz, radius_um, d_target_um } => {
                if self.atoms != 4 {
                    return Err(Error::Config("interactions.superatom needs exactly 4 atoms".into()));
                }
                superatom_layout(*radius_um, *d_target_um, mhz(*c6_mhz))?
            }
        };
        interactions.ddf = self.ddf.map(|d| DdfShift {
            pair: d.pair,
            c6: mhz(d.c6_mhz),
            d_ideal: d.d_ideal_um,
            d_actual: d.d_actual_um.unwrap_or(d.d_ideal_um),
        });
        let noise = NoiseSpec {
            decay: self.noise.decay_tau_us.map(|tau| DecayNoise { tau }),
            ddf_sigma: self.noise.ddf_sigma_um,
            doppler: self.noise.doppler.map(|d| DopplerNoise {
                temperature: d.temperature_uk * 1e-6,
                k_eff: d.k_eff_per_m,
                mass: d.mass_kg,
            }),
        };
        let comp = 1usize.checked_shl(self.atoms as u32).unwrap_or(0);
        let initial = match &self.initial_state {
            InitialStateConfig::Reference => {
                if self.atoms != 2 {
                    return Err(Error::Config("initial_state \"reference\" is defined for 2 atoms".into()));
                }
                reference_two_qubit_input()
            }
            InitialStateConfig::Uniform => uniform_input(self.atoms),
            InitialStateConfig::Amplitudes(list) => {
                if list.len() != comp {
                    return Err(Error::Config(format!(
                        "initial_state.amplitudes: expected {comp} entries, found {}",
                        list.len()
                    )));
                }
                let norm = list.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt();
                if !(norm > 0.0) {
                    return Err(Error::Config("initial_state.amplitudes: zero vector".into()));
                }
                list.iter().map(|&(re, im)| C64::new(re / norm, im / norm)).collect()
            }
        };
        let scenario = Scenario {
            n_atoms: self.atoms,
            drives: self.drives.iter().map(DriveConfig::to_spec).collect(),
            interactions,
            noise,
            level_shifts: self
                .level_shifts
                .iter()
                .map(|s| LevelShift {
                    atom: s.atom,
                    level: s.level,
                    offset: mhz(s.offset_mhz),
                    cos2_amplitude: mhz(s.cos2_amplitude_mhz),
                    frequency: mhz(s.frequency_mhz),
                })
                .collect(),
            initial,
            t_final: self.t_final_us,
            target: self.target.clone(),
            seed: self.seed,
            blockade_cutoff: self.blockade_cutoff_mhz.map(mhz),
        };
        scenario.validate().map_err(|e| Error::Config(format!("scenario: {e}")))?;
        if self.samples < 2 {
            return Err(Error::Config("samples must be at least 2".into()));
        }
        self.plateau_window()?;
        Ok(scenario)
    }

    /// Config describing `scenario` with explicit pair strengths and amplitudes.
    pub fn from_scenario(s: &Scenario) -> Self {
        Self {
            atoms: s.n_atoms,
            drives: s.drives.iter().map(DriveConfig::from_spec).collect(),
            interactions: InteractionConfig::Explicit(
                s.interactions.pairs.iter().map(|(&pair, &v)| PairConfig { pair, v_mhz: to_mhz(v) }).collect(),
            ),
            ddf: s.interactions.ddf.map(|d| DdfConfig {
                pair: d.pair,
                c6_mhz: to_mhz(d.c6),
                d_ideal_um: d.d_ideal,
                d_actual_um: Some(d.d_actual),
            }),
            noise: NoiseConfig {
                decay_tau_us: s.noise.decay.map(|d| d.tau),
                ddf_sigma_um: s.noise.ddf_sigma,
                doppler: s.noise.doppler.map(|d| DopplerConfig {
                    temperature_uk: d.temperature * 1e6,
                    k_eff_per_m: d.k_eff,
                    mass_kg: d.mass,
                }),
            },
            level_shifts: s
                .level_shifts
                .iter()
                .map(|l| LevelShiftConfig {
                    atom: l.atom,
                    level: l.level,
                    offset_mhz: to_mhz(l.offset),
                    cos2_amplitude_mhz: to_mhz(l.cos2_amplitude),
                    frequency_mhz: to_mhz(l.frequency),
                })
                .collect(),
            initial_state: InitialStateConfig::Amplitudes(s.initial.iter().map(|a| (a.re, a.im)).collect()),
            t_final_us: s.t_final,
            target: s.target.clone(),
            seed: s.seed,
            blockade_cutoff_mhz: s.blockade_cutoff.map(to_mhz),
            samples: default_samples(),
            plateau_cycles: None,
            plateau_rabi_mhz: None,
            solver: None,
        }
    }

    /// Plateau window in µs: `cycles / f` with `f = plateau_rabi_mhz`.
    pub fn plateau_window(&self) -> Result<Option<(f64, f64)>> {
        match (self.plateau_cycles, self.plateau_rabi_mhz) {
            (None, None) => Ok(None),
            (Some((a, b)), Some(f)) if f > 0.0 && a <= b => Ok(Some((a / f, b / f))),
            (Some(_), Some(_)) => Err(Error::Config("plateau: need plateau_rabi_mhz > 0 and an ordered window".into())),
            _ => Err(Error::Config("plateau_cycles and plateau_rabi_mhz must be given together".into())),
        }
    }

    pub fn sample_times(&self) -> Vec<f64> {
        crate::propagation::IntegratorConfig::uniform_samples(self.t_final_us, self.samples)
    }
}

/// A list of campaigns run together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub campaigns: Vec<CampaignSpec>,
    #[serde(default)]
    pub solver: Option<SolverSettings>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PresetBody {
    Simulate(Box<ScenarioConfig>),
    Campaign(CampaignConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub body: PresetBody,
}

/// Parses a JSON document; errors carry the line and column.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("{what}: {e}")))
}

/// A document is a campaign config when it has a top-level `campaigns` key.
pub fn parse_document(text: &str, what: &str) -> Result<PresetBody> {
    let value: serde_json::Value = parse_json(text, what)?;
    if value.get("campaigns").is_some() {
        Ok(PresetBody::Campaign(parse_json(text, what)?))
    } else {
        Ok(PresetBody::Simulate(Box::new(parse_json(text, what)?)))
    }
}

const PRESET_FILES: &[(&str, &str, &str)] = &[
    ("fig2", "Cyclic Rabi/Raman CZ gate, Ωm = 2√3Ω2, V = ω = 500Ω2", include_str!("../presets/fig2.json")),
    ("fig3", "Strong modulated control, Ωm = 100Ω2, V = ω = 500Ω2", include_str!("../presets/fig3.json")),
    ("fig4", "LZS target drive, Δ̄ = 6Ω2, Δ0 = 5Ω2, ω̄ = 0.5Ω2", include_str!("../presets/fig4.json")),
    ("fig5", "Relative errors in T, Ω2 and V for the three schemes", include_str!("../presets/fig5.json")),
    ("fig6", "Intrinsic error against evolution time, V/2π = 70 MHz", include_str!("../presets/fig6.json")),
    ("fig7", "Decay error against Rydberg lifetime", include_str!("../presets/fig7.json")),
    ("fig8", "DDF error against σ_d for n = 70 and n = 100", include_str!("../presets/fig8.json")),
    ("fig9a", "Doppler error against temperature, Ω2/2π = 0.1 and 1 MHz", include_str!("../presets/fig9a.json")),
    ("fig9b", "Doppler error, Ω2/2π = 5 MHz, with the blockade baseline", include_str!("../presets/fig9b.json")),
    ("fig9c", "Intrinsic error of the LZS scheme at Ω2/2π = 5 MHz", include_str!("../presets/fig9c.json")),
    ("fig10", "Three-qubit phase gate, strong control drive", include_str!("../presets/fig10.json")),
    ("fig10-lzs", "Three-qubit phase gate with the LZS target drive", include_str!("../presets/fig10-lzs.json")),
    ("fig11", "Four-qubit phase gate, strong control drive", include_str!("../presets/fig11.json")),
    ("fig11-lzs", "Four-qubit phase gate with the LZS target drive", include_str!("../presets/fig11-lzs.json")),
    ("fig12", "Four-qubit superatom gate against control radius", include_str!("../presets/fig12.json")),
    ("decay-point", "Strong-drive CZ gate with Rydberg decay, τ = 100 µs", include_str!("../presets/decay-point.json")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESET_FILES.iter().map(|(n, _, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<Preset> {
    let (name, description, text) = PRESET_FILES
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("unknown preset `{name}`; try list-presets")))?;
    Ok(Preset { name, description, body: parse_document(text, &format!("preset {name}"))? })
}

pub fn presets() -> Result<Vec<Preset>> {
    PRESET_FILES.iter().map(|(n, _, _)| preset(n)).collect()
}

/// Raw JSON of a preset.
pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESET_FILES.iter().find(|(n, _, _)| *n == name).map(|(_, _, t)| *t)
}

/// Builds the scenario config of a two-qubit scheme, used to author presets.
pub fn scheme_config(scheme: Scheme, params: &GateParams) -> ScenarioConfig {
    let mut c = ScenarioConfig::from_scenario(&crate::campaigns::two_qubit(scheme, params));
    c.initial_state = InitialStateConfig::Reference;
    c
}

/// Superatom scenario config, used to author presets.
pub fn superatom_config(params: &GateParams, c6_mhz: f64, d_target_um: f64, radius_um: f64, factor: f64) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig::from_scenario(&superatom_scenario(params, c6_mhz, d_target_um, radius_um, factor)?))
}
