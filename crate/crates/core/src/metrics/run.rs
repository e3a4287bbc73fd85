use serde::{Deserialize, Serialize};

use crate::algebra::{DensityMatrix, StateVector};
use crate::error::{Error, Result};
use crate::metrics::{phase_of, target_state, GateTarget};
use crate::propagation::{evolve_lindblad, evolve_schrodinger, IntegratorConfig, IntegratorStats, Method};
use crate::system::{assemble_collapse_ops, assemble_hamiltonian, blockade_subspace, Scenario};
use crate::units::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// µs.
    #[serde(default)]
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { method: Method::AdaptiveRk, rel_tol: 1e-10, abs_tol: 1e-12, max_step: None, max_steps: 50_000_000 }
    }
}

impl SolverSettings {
    pub fn with_tolerance(self, rel_tol: f64) -> Self {
        Self { rel_tol, abs_tol: rel_tol * 1e-2, ..self }
    }

    fn config(&self, times: Vec<f64>) -> IntegratorConfig<f64> {
        IntegratorConfig {
            method: self.method,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            t_start: 0.0,
            sample_times: times,
            max_steps: self.max_steps,
        }
    }
}

/// Sampled gate dynamics projected onto the computational basis.
#[derive(Debug, Clone, Serialize)]
pub struct GateRun {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    /// `populations[k][c]`: population of computational state `c` at `times[k]`.
    pub populations: Vec<Vec<f64>>,
    /// Phases of computational amplitudes; `None` for mixed states or
    /// vanishing amplitudes.
    pub phases: Vec<Vec<Option<f64>>>,
    /// Total population of states with at least one Rydberg excitation.
    pub rydberg_population: Vec<f64>,
    pub open_system: bool,
    pub reduced_dim: usize,
    pub full_dim: usize,
    pub stats: IntegratorStats,
}

impl GateRun {
    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity.last().expect("run has samples")
    }

    pub fn fidelity_at(&self, t: f64) -> Option<f64> {
        self.times.iter().position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0)).map(|k| self.fidelity[k])
    }

    /// Worst fidelity and worst phase error of the sign-flipped states over
    /// the samples in `[t0, t1]`. `None` if no sample falls in the window.
    pub fn plateau(&self, t0: f64, t1: f64, target: &GateTarget) -> Result<Option<Plateau>> {
        let signs = target.signs()?;
        let flipped: Vec<usize> = (0..signs.len()).filter(|&c| signs[c] < 0.0).collect();
        let mut out: Option<Plateau> = None;
        for (k, &t) in self.times.iter().enumerate() {
            if t < t0 - 1e-12 || t > t1 + 1e-12 {
                continue;
            }
            let p = out.get_or_insert(Plateau { t_start: t0, t_end: t1, min_fidelity: 1.0, max_phase_error: Some(0.0) });
            p.min_fidelity = p.min_fidelity.min(self.fidelity[k]);
            for &c in &flipped {
                let err = self.phases[k].get(c).copied().flatten().map(|ph| (PI - ph.abs()).abs());
                p.max_phase_error = match (p.max_phase_error, err) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plateau {
    pub t_start: f64,
    pub t_end: f64,
    pub min_fidelity: f64,
    /// Largest `|π - |phase||` of the states the target flips; `None` when a
    /// phase was undefined.
    pub max_phase_error: Option<f64>,
}

/// Integrates `scenario` and samples it at `times` (µs, nondecreasing).
pub fn simulate(scenario: &Scenario, settings: &SolverSettings, times: &[f64]) -> Result<GateRun> {
    scenario.validate()?;
    if times.is_empty() {
        return Err(Error::param("times", "no sample times"));
    }
    let space = scenario.space();
    let sub = blockade_subspace(scenario, &space);
    let h_full = assemble_hamiltonian(scenario)?;
    let h = if sub.is_full() { h_full } else { h_full.restrict(sub.kept()) };

    let psi0_full = scenario.initial_state(&space)?;
    let tgt_full = target_state(&psi0_full, &scenario.target, &space)?;
    let (psi0, _) = sub.project(psi0_full.amplitudes());
    let (tgt, _) = sub.project(tgt_full.amplitudes());
    let psi0 = StateVector::from_raw(psi0);
    let tgt = StateVector::from_raw(tgt);

    let mut position = vec![None; space.dim()];
    for (k, &i) in sub.kept().iter().enumerate() {
        position[i] = Some(k);
    }
    let comp: Vec<usize> = space
        .computational_indices()
        .into_iter()
        .map(|i| position[i].ok_or_else(|| Error::InvalidScenario("blockade cutoff removed a computational state".into())))
        .collect::<Result<_>>()?;
    let rydberg: Vec<usize> =
        sub.kept().iter().enumerate().filter(|(_, &i)| space.rydberg_count(i) > 0).map(|(k, _)| k).collect();

    let cfg = settings.config(times.to_vec());
    let labels = scenario.target.labels();
    let mut run = GateRun {
        labels,
        times: times.to_vec(),
        fidelity: Vec::with_capacity(times.len()),
        populations: Vec::with_capacity(times.len()),
        phases: Vec::with_capacity(times.len()),
        rydberg_population: Vec::with_capacity(times.len()),
        open_system: scenario.noise.decay.is_some(),
        reduced_dim: sub.dim(),
        full_dim: space.dim(),
        stats: IntegratorStats::default(),
    };

    if scenario.noise.decay.is_some() {
        let collapse: Vec<_> =
            assemble_collapse_ops(scenario)?.iter().map(|l| if sub.is_full() { l.clone() } else { l.restrict(sub.kept()) }).collect();
        let traj = evolve_lindblad(&h, &collapse, &DensityMatrix::from_pure(&psi0), &cfg)?;
        for rho in &traj.states {
            run.fidelity.push(rho.expectation(&tgt).max(0.0).sqrt());
            run.populations.push(comp.iter().map(|&i| rho.population(i)).collect());
            run.phases.push(vec![None; comp.len()]);
            run.rydberg_population.push(rydberg.iter().map(|&i| rho.population(i)).sum());
        }
        run.stats = traj.stats;
    } else {
        let traj = evolve_schrodinger(&h, &psi0, &cfg)?;
        for psi in &traj.states {
            run.fidelity.push(psi.inner(&tgt).norm());
            run.populations.push(comp.iter().map(|&i| psi.population(i)).collect());
            let amps = psi.amplitudes();
            run.phases.push(comp.iter().map(|&i| phase_of::<f64>(amps[i]).ok()).collect());
            run.rydberg_population.push(rydberg.iter().map(|&i| psi.population(i)).sum());
        }
        run.stats = traj.stats;
    }
    Ok(run)
}

/// Fidelity at `scenario.t_final`.
pub fn final_fidelity(scenario: &Scenario, settings: &SolverSettings) -> Result<f64> {
    Ok(simulate(scenario, settings, &[scenario.t_final])?.final_fidelity())
}
