use crate::algebra::{embed, pair_projector, Level, Operator, Space};
use crate::error::{Error, Result};
use crate::system::{ddf_term, DecayNoise, DriveKind, Scenario};
use crate::timeop::{Envelope, Hamiltonian, Subspace, Term};
use crate::C64;

/// Full Hamiltonian of `scenario` on `scenario.space()`.
pub fn assemble_hamiltonian(scenario: &Scenario) -> Result<Hamiltonian<f64>> {
    scenario.validate()?;
    let space = scenario.space();
    let mut h = Hamiltonian::new(space.dim());

    for drive in &scenario.drives {
        let j = drive.atom;
        let scheme = space.atom(j)?;
        let lower = embed(&scheme.transition::<f64>(Level::G1, Level::Ryd)?, j, &space)?;
        let delta = drive.doppler_shift;
        let coupling = match &drive.kind {
            DriveKind::Constant { rabi } => Envelope::Constant(rabi / 2.0),
            DriveKind::AmplitudeModulated { omega_max, mod_freq } => {
                Envelope::Cosine { amplitude: omega_max / 2.0, frequency: *mod_freq }
            }
            DriveKind::FrequencyModulated { rabi, delta0, delta_bar, omega_bar } => {
                let n_r = embed(&scheme.transition::<f64>(Level::Ryd, Level::Ryd)?, j, &space)?;
                h.add_term(Term::hermitian(
                    Envelope::OffsetCosine { offset: *delta0, amplitude: *delta_bar, frequency: *omega_bar },
                    &n_r,
                ));
                Envelope::Constant(rabi / 2.0)
            }
            DriveKind::PulseTrain { rabi, windows } => {
                Envelope::Windows { amplitude: rabi / 2.0, windows: windows.clone() }
            }
        };
        h.add_term(Term::with_conjugate(coupling, delta, &lower));
    }

    let mut interaction = Operator::zeros(space.dim());
    for (&(i, j), &v) in &scenario.interactions.pairs {
        if v != 0.0 {
            interaction = &interaction
                + &pair_projector::<f64>(Level::Ryd, Level::Ryd, (i, j), &space)?.scale(C64::new(v, 0.0));
        }
    }
    if let Some(ddf) = &scenario.interactions.ddf {
        interaction = &interaction + &ddf_term(ddf.c6, ddf.d_ideal, ddf.d_actual, ddf.pair, &space)?;
    }
    h.add_static(&interaction);

    for shift in &scenario.level_shifts {
        let scheme = space.atom(shift.atom)?;
        let n = embed(&scheme.transition::<f64>(shift.level, shift.level)?, shift.atom, &space)?;
        if shift.offset != 0.0 {
            h.add_static(&n.scale(C64::new(shift.offset, 0.0)));
        }
        if shift.cos2_amplitude != 0.0 {
            h.add_term(Term::hermitian(
                Envelope::CosineSquared { amplitude: shift.cos2_amplitude, frequency: shift.frequency },
                &n,
            ));
        }
    }
    Ok(h)
}

/// `(gamma_0, gamma_1, gamma_g)` for Rydberg lifetime `tau`.
pub fn decay_rates(tau: f64) -> [f64; 3] {
    [1.0 / (8.0 * tau), 1.0 / (8.0 * tau), 3.0 / (4.0 * tau)]
}

/// Three decay channels `sqrt(gamma_k) |k><r|` per atom, `k` in `(0, 1, g)`.
pub fn collapse_operators(space: &Space, decay: &DecayNoise) -> Result<Vec<Operator<f64>>> {
    if !(decay.tau > 0.0) {
        return Err(Error::param("tau", format!("must be positive, got {}", decay.tau)));
    }
    let rates = decay_rates(decay.tau);
    let mut out = Vec::with_capacity(3 * space.n_atoms());
    for j in 0..space.n_atoms() {
        let scheme = space.atom(j)?;
        if !scheme.has(Level::Leak) {
            return Err(Error::MissingLevel(Level::Leak));
        }
        for (k, rate) in [Level::G0, Level::G1, Level::Leak].into_iter().zip(rates) {
            let op = embed(&scheme.transition::<f64>(k, Level::Ryd)?, j, space)?;
            out.push(op.scale(C64::new(rate.sqrt(), 0.0)));
        }
    }
    Ok(out)
}

/// Collapse operators of `scenario`; empty when no decay is configured.
pub fn assemble_collapse_ops(scenario: &Scenario) -> Result<Vec<Operator<f64>>> {
    match &scenario.noise.decay {
        Some(decay) => collapse_operators(&scenario.space(), decay),
        None => Ok(Vec::new()),
    }
}

/// Basis states whose static pair-interaction energy stays below the
/// scenario's blockade cutoff (all states when no cutoff is set).
pub fn blockade_subspace(scenario: &Scenario, space: &Space) -> Subspace {
    let Some(cutoff) = scenario.blockade_cutoff else {
        return Subspace::full(space.dim());
    };
    let keep = (0..space.dim())
        .filter(|&idx| {
            let levels = space.levels_of(idx);
            let energy: f64 = scenario
                .interactions
                .pairs
                .iter()
                .filter(|(&(i, j), _)| levels[i] == Level::Ryd && levels[j] == Level::Ryd)
                .map(|(_, v)| v.abs())
                .sum();
            energy <= cutoff
        })
        .collect();
    Subspace::new(space.dim(), keep)
}
