use serde::{Deserialize, Serialize};

use crate::campaigns::runner::{aggregate, parallel_map, run_trials, CampaignPoint};
use crate::campaigns::{blockade_gate, two_qubit, GateParams, Scheme};
use crate::error::{Error, Result};
use crate::metrics::{final_fidelity, simulate, SolverSettings};
use crate::system::{superatom_layout, vdw_strength, DdfShift, DecayNoise, DopplerNoise, Scenario};
use crate::units::{mhz, C6_100S_MHZ, C6_70S_MHZ};

pub const DEFAULT_TRIALS: usize = 201;

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeParameter {
    GateTime,
    Rabi,
    Interaction,
}

/// Pair geometry for distance disorder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairGeometry {
    /// `C6/2π`, MHz·µm⁶.
    pub c6_mhz: f64,
    pub d_ideal_um: f64,
}

impl PairGeometry {
    pub fn n70() -> Self {
        Self { c6_mhz: C6_70S_MHZ, d_ideal_um: 4.8 }
    }

    pub fn n100() -> Self {
        Self { c6_mhz: C6_100S_MHZ, d_ideal_um: 9.6 }
    }

    pub fn v_mhz(&self) -> f64 {
        self.c6_mhz / self.d_ideal_um.powi(6)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CampaignKind {
    /// Fidelity with one parameter scaled by `1 + offset`.
    RelativeError { parameter: RelativeParameter, scheme: Scheme, params: GateParams, offsets: Vec<f64> },
    /// `1 - F(t)` of the noiseless gate at `t = cycles · 2π/Ω2`.
    TimeScan { scheme: Scheme, params: GateParams, cycles: Vec<f64> },
    /// Isolated decay error against lifetime (µs).
    Decay { scheme: Scheme, params: GateParams, lifetimes_us: Vec<f64> },
    /// Isolated DDF error against the separation spread (µm).
    Ddf {
        scheme: Scheme,
        params: GateParams,
        pair: PairGeometry,
        sigmas_um: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    /// Isolated Doppler error against temperature (µK).
    Doppler {
        scheme: Scheme,
        params: GateParams,
        temperatures_uk: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    /// Total error `1 - F` of the three-pulse blockade gate against temperature (µK).
    BlockadeDoppler {
        omega_r_mhz: f64,
        v_mhz: f64,
        temperatures_uk: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    /// `1 - F` of the four-atom superatom gate against the control radius (µm).
    Radius {
        params: GateParams,
        c6_mhz: f64,
        d_target_um: f64,
        radii_um: Vec<f64>,
        /// Drop basis states whose interaction energy exceeds this multiple
        /// of the control-target strength.
        blockade_factor: f64,
    },
}

/// Unknown keys are rejected by the flattened `kind` variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: CampaignKind,
    #[serde(default)]
    pub base_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignResult {
    pub name: String,
    pub spec: CampaignSpec,
    pub spec_hash: String,
    pub base_seed: u64,
    /// Noiseless fidelity of the unperturbed scenario at its nominal time.
    pub nominal_fidelity: f64,
    pub points: Vec<CampaignPoint>,
}

pub const CAMPAIGN_CSV_HEADER: &str = "grid_value,mean_error,std_error,n_trials";

impl CampaignResult {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CAMPAIGN_CSV_HEADER}\n");
        for p in &self.points {
            out.push_str(&format!("{:.12e},{:.12e},{:.6e},{}\n", p.grid_value, p.mean_error, p.std_error, p.n_trials));
        }
        out
    }

    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "spec": self.spec,
            "spec_hash": self.spec_hash,
            "base_seed": self.base_seed,
            "nominal_fidelity": self.nominal_fidelity,
            "points": self.points,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

/// FNV-1a over the canonical JSON of `spec`.
pub fn spec_hash(spec: &CampaignSpec) -> String {
    let text = serde_json::to_string(spec).unwrap_or_default();
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn nonempty(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("campaign grid is empty".into()));
    }
    if grid.iter().any(|g| !g.is_finite()) {
        return Err(Error::Config("campaign grid has non-finite values".into()));
    }
    Ok(())
}

/// Scenario with one parameter scaled by `1 + offset`.
pub fn perturbed(scheme: Scheme, params: &GateParams, parameter: RelativeParameter, offset: f64) -> Scenario {
    let mut s = two_qubit(scheme, params);
    let factor = 1.0 + offset;
    match parameter {
        RelativeParameter::GateTime => s.t_final *= factor,
        RelativeParameter::Rabi => {
            let mut p = *params;
            p.omega2_mhz *= factor;
            s.drives[1] = p.target_drive(1, scheme);
            if let crate::system::DriveKind::FrequencyModulated { delta0, delta_bar, omega_bar, .. } = &mut s.drives[1].kind {
                let o2 = params.omega2();
                *delta0 = params.lzs.delta0 * o2;
                *delta_bar = params.lzs.delta_bar * o2;
                *omega_bar = params.lzs.omega_bar * o2;
            }
        }
        RelativeParameter::Interaction => s.interactions = s.interactions.scaled(factor),
    }
    s
}

pub fn ddf_scenario(scheme: Scheme, params: &GateParams, pair: &PairGeometry, sigma_um: f64) -> Scenario {
    let mut s = two_qubit(scheme, params);
    s.interactions.ddf =
        Some(DdfShift { pair: (0, 1), c6: mhz(pair.c6_mhz), d_ideal: pair.d_ideal_um, d_actual: pair.d_ideal_um });
    s.noise.ddf_sigma = Some(sigma_um);
    s
}

/// Four-atom chain with controls at `-R, 0, R` and the target at `d_target`.
pub fn superatom_scenario(params: &GateParams, c6_mhz: f64, d_target_um: f64, radius_um: f64, blockade_factor: f64) -> Result<Scenario> {
    let mut s = crate::campaigns::multi_qubit(4, Scheme::Strong, params, &[]);
    s.interactions = superatom_layout(radius_um, d_target_um, mhz(c6_mhz))?;
    let v = vdw_strength(mhz(c6_mhz), d_target_um)?;
    s.blockade_cutoff = Some(blockade_factor * v);
    Ok(s)
}

impl CampaignSpec {
    pub fn grid(&self) -> &[f64] {
        match &self.kind {
            CampaignKind::RelativeError { offsets, .. } => offsets,
            CampaignKind::TimeScan { cycles, .. } => cycles,
            CampaignKind::Decay { lifetimes_us, .. } => lifetimes_us,
            CampaignKind::Ddf { sigmas_um, .. } => sigmas_um,
            CampaignKind::Doppler { temperatures_uk, .. } | CampaignKind::BlockadeDoppler { temperatures_uk, .. } => {
                temperatures_uk
            }
            CampaignKind::Radius { radii_um, .. } => radii_um,
        }
    }

    pub fn validate(&self) -> Result<()> {
        nonempty(self.grid())?;
        match &self.kind {
            CampaignKind::Ddf { trials, sigmas_um, .. } => {
                if *trials == 0 {
                    return Err(Error::Config("trials must be at least 1".into()));
                }
                if sigmas_um.iter().any(|s| *s < 0.0) {
                    return Err(Error::Config("sigma_d must be non-negative".into()));
                }
            }
            CampaignKind::Doppler { trials, temperatures_uk, .. }
            | CampaignKind::BlockadeDoppler { trials, temperatures_uk, .. } => {
                if *trials == 0 {
                    return Err(Error::Config("trials must be at least 1".into()));
                }
                if temperatures_uk.iter().any(|t| *t < 0.0) {
                    return Err(Error::Config("temperatures must be non-negative".into()));
                }
            }
            CampaignKind::Decay { lifetimes_us, .. } => {
                if lifetimes_us.iter().any(|t| !(*t > 0.0)) {
                    return Err(Error::Config("lifetimes must be positive".into()));
                }
            }
            CampaignKind::Radius { radii_um, d_target_um, .. } => {
                if radii_um.iter().any(|r| !(*r > 0.0 && r < d_target_um)) {
                    return Err(Error::Config("radii must satisfy 0 < R < d_target".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Noiseless, unperturbed scenario of the campaign.
    pub fn nominal_scenario(&self) -> Result<Scenario> {
        Ok(match &self.kind {
            CampaignKind::RelativeError { scheme, params, .. }
            | CampaignKind::TimeScan { scheme, params, .. }
            | CampaignKind::Decay { scheme, params, .. }
            | CampaignKind::Ddf { scheme, params, .. }
            | CampaignKind::Doppler { scheme, params, .. } => two_qubit(*scheme, params),
            CampaignKind::BlockadeDoppler { omega_r_mhz, v_mhz, .. } => blockade_gate(*omega_r_mhz, *v_mhz),
            CampaignKind::Radius { params, c6_mhz, d_target_um, radii_um, blockade_factor } => {
                superatom_scenario(params, *c6_mhz, *d_target_um, radii_um[0], *blockade_factor)?
            }
        })
    }

    pub fn run(&self, settings: &SolverSettings, jobs: usize) -> Result<CampaignResult> {
        self.validate()?;
        let grid = self.grid().to_vec();
        let seed = self.base_seed;
        let nominal = self.nominal_scenario()?;
        let f_nominal = final_fidelity(&nominal, settings)?;
        let ones = vec![1.0; grid.len()];

        let points = match &self.kind {
            CampaignKind::RelativeError { parameter, scheme, params, .. } => {
                let fs = parallel_map(jobs, &grid, |&off| final_fidelity(&perturbed(*scheme, params, *parameter, off), settings))?;
                aggregate(&grid, &ones, &fs.into_iter().map(|f| vec![f]).collect::<Vec<_>>())
            }
            CampaignKind::TimeScan { params, .. } => {
                let times: Vec<f64> = grid.iter().map(|c| c * std::f64::consts::TAU / params.omega2()).collect();
                let mut order: Vec<usize> = (0..times.len()).collect();
                order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
                let sorted: Vec<f64> = order.iter().map(|&k| times[k]).collect();
                let mut s = nominal.clone();
                s.t_final = sorted.last().copied().unwrap_or(s.t_final).max(f64::MIN_POSITIVE);
                let run = simulate(&s, settings, &sorted)?;
                let mut fs = vec![Vec::new(); grid.len()];
                for (pos, &k) in order.iter().enumerate() {
                    fs[k] = vec![run.fidelity[pos]];
                }
                aggregate(&grid, &ones, &fs)
            }
            CampaignKind::Decay { .. } => {
                let fs = parallel_map(jobs, &grid, |&tau| {
                    let mut s = nominal.clone();
                    s.noise.decay = Some(DecayNoise { tau });
                    final_fidelity(&s, settings)
                })?;
                aggregate(&grid, &vec![f_nominal; grid.len()], &fs.into_iter().map(|f| vec![f]).collect::<Vec<_>>())
            }
            CampaignKind::Ddf { scheme, params, pair, trials, .. } => {
                let templates: Vec<Scenario> = grid.iter().map(|&sig| ddf_scenario(*scheme, params, pair, sig)).collect();
                let fs = run_trials(grid.len(), *trials, seed, jobs, |g, rng| {
                    final_fidelity(&templates[g].realize(rng)?, settings)
                })?;
                aggregate(&grid, &vec![f_nominal; grid.len()], &fs)
            }
            CampaignKind::Doppler { trials, .. } | CampaignKind::BlockadeDoppler { trials, .. } => {
                let templates: Vec<Scenario> = grid
                    .iter()
                    .map(|&t_uk| {
                        let mut s = nominal.clone();
                        s.noise.doppler = Some(DopplerNoise::rb87(t_uk * 1e-6));
                        s
                    })
                    .collect();
                let fs = run_trials(grid.len(), *trials, seed, jobs, |g, rng| {
                    final_fidelity(&templates[g].realize(rng)?, settings)
                })?;
                let reference = match self.kind {
                    CampaignKind::BlockadeDoppler { .. } => ones,
                    _ => vec![f_nominal; grid.len()],
                };
                aggregate(&grid, &reference, &fs)
            }
            CampaignKind::Radius { params, c6_mhz, d_target_um, blockade_factor, .. } => {
                let fs = parallel_map(jobs, &grid, |&r| {
                    final_fidelity(&superatom_scenario(params, *c6_mhz, *d_target_um, r, *blockade_factor)?, settings)
                })?;
                aggregate(&grid, &ones, &fs.into_iter().map(|f| vec![f]).collect::<Vec<_>>())
            }
        };

        Ok(CampaignResult {
            name: self.name.clone(),
            spec: self.clone(),
            spec_hash: spec_hash(self),
            base_seed: seed,
            nominal_fidelity: f_nominal,
            points,
        })
    }
}
