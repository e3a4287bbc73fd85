use num_complex::Complex;

use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn construction_tol<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(256.0))
}

/// Pure state. Normalized to within `1e-9` when built through [`StateVector::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        let state = Self { amps };
        let norm = state.norm();
        if (norm - T::one()).abs() > construction_tol() {
            return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Propagated states keep whatever norm the integrator produced.
    pub fn from_raw(amps: Vec<Complex<T>>) -> Self {
        Self { amps }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[k] = Complex::new(T::one(), T::zero());
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps.iter().zip(&other.amps).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn population(&self, k: usize) -> T {
        self.amps[k].norm_sqr()
    }

    pub fn apply(&self, op: &Operator<T>) -> Self {
        Self { amps: op.apply(&self.amps) }
    }

    pub fn projector(&self) -> Operator<T> {
        Operator::from_fn(self.dim(), |r, c| self.amps[r] * self.amps[c].conj())
    }
}

/// Mixed state. Validated (Hermitian, unit trace, positive) when built through
/// [`DensityMatrix::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    op: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(op: Operator<T>) -> Result<Self> {
        let tol = construction_tol::<T>();
        let herm = op.hermiticity_deviation();
        if herm > tol {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = op.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = op.eigenvalues_hermitian().first().copied().unwrap_or(T::zero());
        if min < -T::lit(1e-8) {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { op })
    }

    pub fn from_pure(psi: &StateVector<T>) -> Self {
        Self { op: psi.projector() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::from_usize(dim).expect("dimension fits");
        Self { op: Operator::identity(dim).scale(Complex::new(w, T::zero())) }
    }

    pub fn from_raw(op: Operator<T>) -> Self {
        Self { op }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn trace(&self) -> T {
        self.op.trace().re
    }

    pub fn population(&self, k: usize) -> T {
        self.op[(k, k)].re
    }

    pub fn min_eigenvalue(&self) -> T {
        self.op.eigenvalues_hermitian().first().copied().unwrap_or(T::zero())
    }

    /// `<psi| rho |psi>`.
    pub fn expectation(&self, psi: &StateVector<T>) -> T {
        let rho_psi = self.op.apply(psi.amplitudes());
        psi.amplitudes().iter().zip(&rho_psi).fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re)
    }
}
