//! Integration of the Schrödinger and Lindblad equations for time-dependent
//! Hamiltonians with fast oscillating terms.

mod ode;

pub use ode::IntegratorStats;

use num_complex::Complex;

use crate::algebra::{DensityMatrix, Operator, SparseOp, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{imag_unit, Real};
use crate::timeop::TimeOperator;

/// Fraction of the fastest oscillation period allowed per step.
pub const STEPS_PER_FAST_PERIOD: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Dormand–Prince 5(4) with dense output.
    AdaptiveRk,
    /// Classical RK4 with uniform steps of at most `max_step`.
    FixedRk4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig<T> {
    pub method: Method,
    pub rel_tol: T,
    pub abs_tol: T,
    /// User cap on the step; the fast-period cap is always applied on top.
    pub max_step: Option<T>,
    pub t_start: T,
    pub sample_times: Vec<T>,
    pub max_steps: usize,
}

impl<T: Real> IntegratorConfig<T> {
    pub fn adaptive(sample_times: Vec<T>) -> Self {
        Self {
            method: Method::AdaptiveRk,
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
            max_step: None,
            t_start: T::zero(),
            sample_times,
            max_steps: 50_000_000,
        }
    }

    pub fn rk4(sample_times: Vec<T>, max_step: T) -> Self {
        Self { method: Method::FixedRk4, max_step: Some(max_step), ..Self::adaptive(sample_times) }
    }

    pub fn with_tolerances(mut self, rel_tol: T, abs_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    /// `n` evenly spaced samples on `[0, t_final]`, endpoints included.
    pub fn uniform_samples(t_final: T, n: usize) -> Vec<T> {
        let n = n.max(2);
        let denom = T::from_usize(n - 1).unwrap();
        (0..n).map(|k| t_final * T::from_usize(k).unwrap() / denom).collect()
    }

    /// Effective step cap: `min(max_step, 2 pi / (20 f_max))`.
    pub fn step_cap(&self, frequency_scale: T) -> T {
        let span = self.sample_times.last().map(|&t| t - self.t_start).unwrap_or(T::one()).abs();
        let fast = if frequency_scale > T::zero() {
            T::TAU() / (T::lit(STEPS_PER_FAST_PERIOD) * frequency_scale)
        } else {
            span
        };
        let cap = self.max_step.map_or(fast, |m| m.min(fast));
        if cap > T::zero() {
            cap
        } else {
            span.max(T::one())
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero()) {
            return Err(Error::param("tolerance", "tolerances must be positive"));
        }
        if self.sample_times.is_empty() {
            return Err(Error::param("sample_times", "no sample times requested"));
        }
        if self.sample_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("sample_times", "sample times must be nondecreasing"));
        }
        if self.sample_times[0] < self.t_start {
            return Err(Error::param("sample_times", "sample before start time"));
        }
        Ok(())
    }
}

/// Sampled solution.
#[derive(Debug, Clone)]
pub struct Trajectory<T, S> {
    pub times: Vec<T>,
    pub states: Vec<S>,
    pub stats: IntegratorStats,
}

impl<T: Real, S> Trajectory<T, S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory has samples")
    }
}

impl<T: Real> Trajectory<T, StateVector<T>> {
    /// Largest `| |psi(t)| - 1 |` over the samples.
    pub fn norm_drift(&self) -> T {
        self.states.iter().fold(T::zero(), |m, s| m.max((s.norm() - T::one()).abs()))
    }
}

impl<T: Real> Trajectory<T, DensityMatrix<T>> {
    pub fn trace_drift(&self) -> T {
        self.states.iter().fold(T::zero(), |m, s| m.max((s.trace() - T::one()).abs()))
    }

    pub fn hermiticity_drift(&self) -> T {
        self.states.iter().fold(T::zero(), |m, s| m.max(s.operator().hermiticity_deviation()))
    }

    pub fn min_eigenvalue(&self) -> T {
        self.states.iter().fold(T::infinity(), |m, s| m.min(s.min_eigenvalue()))
    }
}

fn run<T: Real>(
    rhs: impl FnMut(T, &[Complex<T>], &mut [Complex<T>]),
    y0: Vec<Complex<T>>,
    cfg: &IntegratorConfig<T>,
    breakpoints: &[T],
    cap: T,
) -> Result<(Vec<Vec<Complex<T>>>, IntegratorStats)> {
    cfg.validate()?;
    match cfg.method {
        Method::AdaptiveRk => ode::dopri5(rhs, y0, cfg, breakpoints, cap),
        Method::FixedRk4 => ode::rk4(rhs, y0, cfg, breakpoints, cap),
    }
}

/// Solves `i d|psi>/dt = H(t)|psi>`.
pub fn evolve_schrodinger<T: Real, H: TimeOperator<T> + ?Sized>(
    h: &H,
    psi0: &StateVector<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T, StateVector<T>>> {
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: psi0.dim() });
    }
    let cap = cfg.step_cap(h.frequency_scale());
    let minus_i = -imag_unit::<T>();
    let mut hs = SparseOp::new(h.dim());
    let rhs = |t: T, y: &[Complex<T>], dy: &mut [Complex<T>]| {
        h.fill(t, &mut hs);
        dy.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
        hs.apply_add(minus_i, y, dy);
    };
    let (samples, stats) = run(rhs, psi0.amplitudes().to_vec(), cfg, &h.breakpoints(), cap)?;
    Ok(Trajectory {
        times: cfg.sample_times.clone(),
        states: samples.into_iter().map(StateVector::from_raw).collect(),
        stats,
    })
}

/// Solves `d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2)`.
pub fn evolve_lindblad<T: Real, H: TimeOperator<T> + ?Sized>(
    h: &H,
    collapse: &[Operator<T>],
    rho0: &DensityMatrix<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T, DensityMatrix<T>>> {
    let n = h.dim();
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho0.dim() });
    }
    if let Some(bad) = collapse.iter().find(|l| l.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let jumps: Vec<SparseOp<T>> =
        collapse.iter().map(SparseOp::from_dense).filter(|l| l.nnz() > 0).collect();
    let mut decay = Operator::zeros(n);
    for l in collapse {
        decay = &decay + &l.dagger().matmul(l);
    }
    let decay = SparseOp::from_dense(&decay);

    let cap = cfg.step_cap(h.frequency_scale());
    let i = imag_unit::<T>();
    let half = Complex::new(-T::lit(0.5), T::zero());
    let mut hs = SparseOp::new(n);
    let rhs = |t: T, rho: &[Complex<T>], drho: &mut [Complex<T>]| {
        h.fill(t, &mut hs);
        drho.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
        hs.left_mul_add(-i, rho, drho);
        hs.right_mul_add(i, rho, drho);
        decay.left_mul_add(half, rho, drho);
        decay.right_mul_add(half, rho, drho);
        for l in &jumps {
            l.sandwich_add(rho, drho);
        }
    };
    let y0 = rho0.operator().as_slice().to_vec();
    let (samples, stats) = run(rhs, y0, cfg, &h.breakpoints(), cap)?;
    Ok(Trajectory {
        times: cfg.sample_times.clone(),
        states: samples.into_iter().map(|v| DensityMatrix::from_raw(Operator::from_row_major(n, v))).collect(),
        stats,
    })
}
