//! Analytic reductions of the full gate dynamics: rotating frames, RWA chain
//! Hamiltonians, closed-form amplitudes and the Bessel sideband expansion.

mod bessel;
mod frame;

use num_complex::Complex;

use crate::algebra::Operator;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::timeop::{Envelope, Hamiltonian, Term};

pub use bessel::{
    bessel_decompose, bessel_decompose_truncated, bessel_j, bessel_window, BesselDecomposition, BesselField,
    DEFAULT_BESSEL_CUTOFF,
};
pub use frame::{rotate_frame, RotatedFrame};

/// Nearest-neighbour chain `|0> - |1> - ... - |k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChain<T> {
    pub labels: Vec<String>,
    pub couplings: Vec<T>,
    pub detunings: Vec<T>,
}

impl<T: Real> EffectiveChain<T> {
    pub fn new(labels: Vec<String>, couplings: Vec<T>, detunings: Vec<T>) -> Result<Self> {
        if labels.is_empty() || couplings.len() + 1 != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len().saturating_sub(1), found: couplings.len() });
        }
        if detunings.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: detunings.len() });
        }
        Ok(Self { labels, couplings, detunings })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Drops trailing states that are disconnected by zero couplings.
    pub fn connected(&self) -> Self {
        let keep = self.couplings.iter().position(|g| *g == T::zero()).unwrap_or(self.couplings.len()) + 1;
        Self {
            labels: self.labels[..keep].to_vec(),
            couplings: self.couplings[..keep - 1].to_vec(),
            detunings: self.detunings[..keep].to_vec(),
        }
    }

    pub fn hamiltonian(&self) -> Operator<T> {
        let n = self.dim();
        let mut h = Operator::zeros(n);
        for (k, d) in self.detunings.iter().enumerate() {
            h[(k, k)] = Complex::new(*d, T::zero());
        }
        for (k, g) in self.couplings.iter().enumerate() {
            h[(k, k + 1)] = Complex::new(*g, T::zero());
            h[(k + 1, k)] = Complex::new(*g, T::zero());
        }
        h
    }

    /// Amplitudes at `t` starting from the first chain state.
    pub fn evolve_from_first(&self, t: T) -> Vec<Complex<T>> {
        let u = self.hamiltonian().exp_i_hermitian(-t);
        (0..self.dim()).map(|k| u[(k, 0)]).collect()
    }
}

fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// `Ω2/2 |11><1r| + Ωm/4 |1r><rr| + H.c.`
pub fn effective_h11<T: Real>(omega_m: T, omega2: T) -> EffectiveChain<T> {
    EffectiveChain {
        labels: labels(&["11", "1r", "rr"]),
        couplings: vec![omega2 * T::lit(0.5), omega_m * T::lit(0.25)],
        detunings: vec![T::zero(); 3],
    }
}

/// `Ω2/2 |111><11r| + √2 Ωm/4 |11r><Φ| + H.c.`, `|Φ> = (|r1r> + |1rr>)/√2`.
pub fn effective_h111<T: Real>(omega_m: T, omega2: T) -> EffectiveChain<T> {
    EffectiveChain {
        labels: labels(&["111", "11r", "Phi"]),
        couplings: vec![omega2 * T::lit(0.5), T::SQRT_2() * omega_m * T::lit(0.25)],
        detunings: vec![T::zero(); 3],
    }
}

/// Closed-form amplitude of `|11>` under [`effective_h11`].
pub fn c11_analytic<T: Real>(t: T, omega_m: T, omega2: T) -> T {
    let s = omega_m * omega_m + T::lit(4.0) * omega2 * omega2;
    if s == T::zero() {
        return T::one();
    }
    (omega_m * omega_m + T::lit(4.0) * omega2 * omega2 * (t * s.sqrt() * T::lit(0.25)).cos()) / s
}

/// Amplitude of `|01>` under the resonant target Rabi drive.
pub fn c01_analytic<T: Real>(t: T, omega2: T) -> T {
    (t * omega2 * T::lit(0.5)).cos()
}

/// `θ(t) = Ωm sin(ωt) / (2ω)`; `|r0>` carries `sin^2 θ`.
pub fn theta_10<T: Real>(t: T, omega_m: T, omega: T) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::param("omega", "modulation frequency must be positive"));
    }
    Ok(omega_m * (omega * t).sin() / (T::lit(2.0) * omega))
}

/// Largest `|r0>` population predicted by [`theta_10`].
pub fn max_r0_population<T: Real>(omega_m: T, omega: T) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::param("omega", "modulation frequency must be positive"));
    }
    let theta_max = (omega_m / (T::lit(2.0) * omega)).abs().min(T::FRAC_PI_2());
    Ok(theta_max.sin().powi(2))
}

/// Coupling of `|110>` to `|φ> = (|r10> + |1r0>)/√2` and of `|φ>` to `|rr0>`,
/// basis order `{|110>, |φ>, |rr0>}`.
pub fn effective_h110<T: Real>(omega_m: T, omega: T, v_prime: T) -> Hamiltonian<T> {
    let g = Complex::new(T::SQRT_2() * omega_m * T::lit(0.25), T::zero());
    let mut h = Hamiltonian::new(3);
    if omega_m == T::zero() {
        return h;
    }
    let mut a = Operator::zeros(3);
    a[(0, 1)] = Complex::new(T::one(), T::zero());
    let mut b = Operator::zeros(3);
    b[(1, 2)] = Complex::new(T::one(), T::zero());
    h.add_term(Term::with_conjugate(Envelope::Phasors(vec![(g, -omega), (g, omega)]), T::zero(), &a));
    h.add_term(Term::with_conjugate(
        Envelope::Phasors(vec![(g, -(omega + v_prime)), (g, omega - v_prime)]),
        T::zero(),
        &b,
    ));
    h
}

/// Frequencies of the second-order `|110> -> |rr0>` channels in
/// [`effective_h110`]; a zero entry is a static two-photon coupling.
pub fn h110_two_photon_detunings<T: Real>(omega: T, v_prime: T) -> Vec<T> {
    let first = [-omega, omega];
    let second = [-(omega + v_prime), omega - v_prime];
    first.iter().flat_map(|&a| second.iter().map(move |&b| a + b)).collect()
}
