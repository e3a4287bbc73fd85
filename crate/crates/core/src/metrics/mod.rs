//! Gate targets, fidelities, phases and error budgets.

mod report;
mod run;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{bit_label, DensityMatrix, Operator, Space, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use report::{error_report, ErrorBudget, GateReport, NoiseToggles};
pub use run::{final_fidelity, simulate, GateRun, Plateau, SolverSettings};

/// Amplitudes below this magnitude have no defined phase.
pub const PHASE_AMPLITUDE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GateTarget {
    /// `diag(1, -1, 1, 1)` over `00, 01, 10, 11`.
    Cz,
    /// `-1` only on `|0...01>`.
    Phase { n: usize },
    /// Arbitrary `±1` diagonal over the computational basis.
    Diagonal { signs: Vec<i8> },
}

impl GateTarget {
    pub fn n_qubits(&self) -> usize {
        match self {
            GateTarget::Cz => 2,
            GateTarget::Phase { n } => *n,
            GateTarget::Diagonal { signs } => signs.len().max(1).trailing_zeros() as usize,
        }
    }

    /// Diagonal entries over the computational basis `0..0, 0..01, ...`.
    pub fn signs(&self) -> Result<Vec<f64>> {
        match self {
            GateTarget::Cz => Ok(vec![1.0, -1.0, 1.0, 1.0]),
            GateTarget::Phase { n } => {
                if *n < 2 || *n > 16 {
                    return Err(Error::param("n", format!("phase gate needs 2 <= n <= 16, got {n}")));
                }
                let mut d = vec![1.0; 1 << n];
                d[1] = -1.0;
                Ok(d)
            }
            GateTarget::Diagonal { signs } => {
                if signs.len() < 4 || !signs.len().is_power_of_two() {
                    return Err(Error::param("signs", "length must be 2^n with n >= 2"));
                }
                if signs.iter().any(|&s| s != 1 && s != -1) {
                    return Err(Error::param("signs", "entries must be +1 or -1"));
                }
                Ok(signs.iter().map(|&s| s as f64).collect())
            }
        }
    }

    /// Computational-basis labels, `"00"`, `"01"`, ...
    pub fn labels(&self) -> Vec<String> {
        let n = self.n_qubits();
        (0..1usize << n).map(|c| bit_label(c, n)).collect()
    }
}

pub fn target_unitary<T: Real>(target: &GateTarget) -> Result<Operator<T>> {
    let signs: Vec<T> = target.signs()?.into_iter().map(T::lit).collect();
    Ok(Operator::diagonal(&signs))
}

/// `U psi0` on the full space, with `U` acting as identity outside the
/// computational subspace.
pub fn target_state<T: Real>(psi0: &StateVector<T>, target: &GateTarget, space: &Space) -> Result<StateVector<T>> {
    if psi0.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: psi0.dim() });
    }
    let comp = space.computational_indices();
    let signs = target.signs()?;
    if signs.len() != comp.len() {
        return Err(Error::DimensionMismatch { expected: comp.len(), found: signs.len() });
    }
    let mut amps = psi0.amplitudes().to_vec();
    for (&idx, &s) in comp.iter().zip(&signs) {
        amps[idx] = amps[idx] * T::lit(s);
    }
    Ok(StateVector::from_raw(amps))
}

/// `|<psi_t| U |psi0>|`.
pub fn fidelity_pure<T: Real>(
    psi_t: &StateVector<T>,
    psi0: &StateVector<T>,
    target: &GateTarget,
    space: &Space,
) -> Result<T> {
    if psi_t.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch { expected: psi0.dim(), found: psi_t.dim() });
    }
    Ok(psi_t.inner(&target_state(psi0, target, space)?).norm())
}

/// `sqrt(<psi_tgt| rho |psi_tgt>)` with `psi_tgt = U psi0`.
pub fn fidelity_mixed<T: Real>(
    rho: &DensityMatrix<T>,
    psi0: &StateVector<T>,
    target: &GateTarget,
    space: &Space,
) -> Result<T> {
    if rho.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch { expected: psi0.dim(), found: rho.dim() });
    }
    Ok(rho.expectation(&target_state(psi0, target, space)?).max(T::zero()).sqrt())
}

/// Argument of a complex amplitude in `(-π, π]`.
pub fn phase_of<T: Real>(amplitude: Complex<T>) -> Result<T> {
    let mag = amplitude.norm();
    if mag.to_f64().unwrap_or(0.0) <= PHASE_AMPLITUDE_FLOOR {
        return Err(Error::UndefinedPhase(mag.to_f64().unwrap_or(0.0)));
    }
    let arg = amplitude.im.atan2(amplitude.re);
    Ok(if arg <= -T::PI() { T::PI() } else { arg })
}

/// Phase of the computational state `label` (e.g. `"01"`) in `psi`.
pub fn phase_of_label<T: Real>(psi: &StateVector<T>, label: &str, space: &Space) -> Result<T> {
    let bits: Vec<bool> = label
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::param("label", format!("not a computational label: {label}"))),
        })
        .collect::<Result<_>>()?;
    phase_of(psi.amplitudes()[space.computational_index(&bits)?])
}

/// `sqrt(0.4)|00> + sqrt(0.3)|01> + sqrt(0.2)|10> + sqrt(0.1)|11>`.
pub fn reference_two_qubit_input() -> Vec<crate::C64> {
    [0.4f64, 0.3, 0.2, 0.1].iter().map(|p| crate::C64::new(p.sqrt(), 0.0)).collect()
}

/// Equal superposition over `n` qubits.
pub fn uniform_input(n: usize) -> Vec<crate::C64> {
    let a = (1.0 / (1usize << n) as f64).sqrt();
    vec![crate::C64::new(a, 0.0); 1 << n]
}
