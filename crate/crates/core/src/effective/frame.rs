use num_complex::Complex;

use crate::algebra::{Operator, SparseOp};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::timeop::TimeOperator;

/// `U H(t) U^dagger - h0` with `U = exp(i h0 t)`.
pub struct RotatedFrame<'a, T: Real, H: TimeOperator<T> + ?Sized> {
    inner: &'a H,
    h0: Operator<T>,
    h0_scale: T,
}

pub fn rotate_frame<'a, T: Real, H: TimeOperator<T> + ?Sized>(
    h: &'a H,
    h0: &Operator<T>,
) -> Result<RotatedFrame<'a, T, H>> {
    if h0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: h0.dim() });
    }
    if !h0.is_hermitian(T::lit(1e-12) * (T::one() + h0.max_abs())) {
        return Err(Error::NotHermitian(h0.hermiticity_deviation().to_f64().unwrap_or(f64::NAN)));
    }
    let h0_scale = h0.eigenvalues_hermitian().into_iter().fold(T::zero(), |m, e| m.max(e.abs()));
    Ok(RotatedFrame { inner: h, h0: h0.clone(), h0_scale })
}

impl<T: Real, H: TimeOperator<T> + ?Sized> TimeOperator<T> for RotatedFrame<'_, T, H> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn fill(&self, t: T, out: &mut SparseOp<T>) {
        out.clear();
        out.push_dense(&self.at(t), Complex::new(T::one(), T::zero()));
    }

    fn frequency_scale(&self) -> T {
        self.inner.frequency_scale() + self.h0_scale + self.h0_scale
    }

    fn breakpoints(&self) -> Vec<T> {
        self.inner.breakpoints()
    }

    fn at(&self, t: T) -> Operator<T> {
        let u = self.h0.exp_i_hermitian(t);
        &u.matmul(&self.inner.at(t)).matmul(&u.dagger()) - &self.h0
    }
}
