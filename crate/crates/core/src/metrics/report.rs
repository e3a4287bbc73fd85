use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::{simulate, GateRun, SolverSettings};
use crate::system::{NoiseSpec, Scenario};

/// Which configured noise factors to isolate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseToggles {
    pub decay: bool,
    pub ddf: bool,
    pub doppler: bool,
}

impl NoiseToggles {
    pub const ALL: Self = Self { decay: true, ddf: true, doppler: true };
    pub const NONE: Self = Self { decay: false, ddf: false, doppler: false };
}

/// Gate errors at the nominal time. Factors that were not evaluated are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub f_nominal: f64,
    pub e_in: f64,
    pub e_de: Option<f64>,
    pub e_dd: Option<f64>,
    pub e_do: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub t_final: f64,
    /// Dynamics of the scenario with its enabled noise (one static-disorder
    /// realization drawn from the scenario seed).
    pub run: GateRun,
    pub errors: ErrorBudget,
}

/// Isolated error contribution `max(0, F_noiseless - F_noisy)`.
pub fn isolated_error(f_noiseless: f64, f_noisy: f64) -> f64 {
    (f_noiseless - f_noisy).max(0.0)
}

fn with_noise(scenario: &Scenario, noise: NoiseSpec) -> Scenario {
    let mut s = scenario.clone();
    s.noise = noise;
    s
}

pub fn error_report(
    scenario: &Scenario,
    toggles: NoiseToggles,
    settings: &SolverSettings,
    times: &[f64],
) -> Result<GateReport> {
    scenario.validate()?;
    let t = scenario.t_final;
    let mut samples: Vec<f64> = times.iter().copied().filter(|&s| s >= 0.0 && s <= t).collect();
    samples.push(t);
    samples.sort_by(f64::total_cmp);
    samples.dedup();

    let noise = scenario.noise;
    let enabled = NoiseSpec {
        decay: noise.decay.filter(|_| toggles.decay),
        ddf_sigma: noise.ddf_sigma.filter(|_| toggles.ddf),
        doppler: noise.doppler.filter(|_| toggles.doppler),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);

    let noiseless = simulate(&scenario.noiseless(), settings, &samples)?;
    let f0 = noiseless.final_fidelity();
    let mut errors = ErrorBudget { f_nominal: f0, e_in: 1.0 - f0, ..Default::default() };

    let mut single = |spec: NoiseSpec| -> Result<f64> {
        let s = with_noise(scenario, spec).realize(&mut rng)?;
        Ok(isolated_error(f0, simulate(&s, settings, &[t])?.final_fidelity()))
    };
    if enabled.decay.is_some() {
        errors.e_de = Some(single(NoiseSpec { decay: enabled.decay, ..Default::default() })?);
    }
    if enabled.ddf_sigma.is_some() {
        errors.e_dd = Some(single(NoiseSpec { ddf_sigma: enabled.ddf_sigma, ..Default::default() })?);
    }
    if enabled.doppler.is_some() {
        errors.e_do = Some(single(NoiseSpec { doppler: enabled.doppler, ..Default::default() })?);
    }

    let run = if enabled == NoiseSpec::default() {
        noiseless
    } else {
        let s = with_noise(scenario, enabled).realize(&mut rng)?;
        simulate(&s, settings, &samples)?
    };
    Ok(GateReport { t_final: t, run, errors })
}

impl GateReport {
    /// `t,F,pop_<label>...,phase_<label>...,p_rydberg`; undefined phases are empty.
    pub fn to_csv(&self) -> String {
        let run = &self.run;
        let mut out = String::from("t,F");
        for l in &run.labels {
            let _ = write!(out, ",pop_{l}");
        }
        for l in &run.labels {
            let _ = write!(out, ",phase_{l}");
        }
        out.push_str(",p_rydberg\n");
        for k in 0..run.times.len() {
            let _ = write!(out, "{:.12e},{:.15e}", run.times[k], run.fidelity[k]);
            for p in &run.populations[k] {
                let _ = write!(out, ",{p:.15e}");
            }
            for ph in &run.phases[k] {
                match ph {
                    Some(v) => {
                        let _ = write!(out, ",{v:.15e}");
                    }
                    None => out.push(','),
                }
            }
            let _ = writeln!(out, ",{:.15e}", run.rydberg_population[k]);
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t_final_us": self.t_final,
            "fidelity": self.errors.f_nominal,
            "e_in": self.errors.e_in,
            "e_de": self.errors.e_de,
            "e_dd": self.errors.e_dd,
            "e_do": self.errors.e_do,
            "open_system": self.run.open_system,
            "reduced_dim": self.run.reduced_dim,
            "full_dim": self.run.full_dim,
            "integrator": self.run.stats,
        })
    }
}
