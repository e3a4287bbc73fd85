use num_complex::Complex;

use super::Operator;
use crate::scalar::Real;

/// Coordinate-list matrix used on the hot path of the integrators.
///
/// Duplicate `(row, col)` entries are allowed and act additively.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp<T> {
    dim: usize,
    entries: Vec<(usize, usize, Complex<T>)>,
}

impl<T: Real> SparseOp<T> {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn from_dense(op: &Operator<T>) -> Self {
        let mut sp = Self::new(op.dim());
        sp.push_dense(op, Complex::new(T::one(), T::zero()));
        sp
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex<T>)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn push(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.entries.push((row, col, value));
    }

    /// Appends `coeff * op` for every nonzero of `op`.
    pub fn push_dense(&mut self, op: &Operator<T>, coeff: Complex<T>) {
        let n = op.dim();
        for r in 0..n {
            for c in 0..n {
                let v = op[(r, c)];
                if v.re != T::zero() || v.im != T::zero() {
                    self.entries.push((r, c, v * coeff));
                }
            }
        }
    }

    /// Appends `coeff * other`.
    pub fn push_scaled(&mut self, other: &SparseOp<T>, coeff: Complex<T>) {
        self.entries.extend(other.entries.iter().map(|&(r, c, v)| (r, c, v * coeff)));
    }

    pub fn dagger(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect() }
    }

    pub fn to_dense(&self) -> Operator<T> {
        let mut op = Operator::zeros(self.dim);
        for &(r, c, v) in &self.entries {
            op[(r, c)] = op[(r, c)] + v;
        }
        op
    }

    /// `out += coeff * A x`.
    pub fn apply_add(&self, coeff: Complex<T>, x: &[Complex<T>], out: &mut [Complex<T>]) {
        for &(r, c, v) in &self.entries {
            out[r] = out[r] + coeff * v * x[c];
        }
    }

    /// `out += coeff * A rho` for row-major `rho`.
    pub fn left_mul_add(&self, coeff: Complex<T>, rho: &[Complex<T>], out: &mut [Complex<T>]) {
        let n = self.dim;
        for &(r, c, v) in &self.entries {
            let w = coeff * v;
            let (src, dst) = (&rho[c * n..(c + 1) * n], r * n);
            for k in 0..n {
                out[dst + k] = out[dst + k] + w * src[k];
            }
        }
    }

    /// `out += coeff * rho A` for row-major `rho`.
    pub fn right_mul_add(&self, coeff: Complex<T>, rho: &[Complex<T>], out: &mut [Complex<T>]) {
        let n = self.dim;
        for &(r, c, v) in &self.entries {
            let w = coeff * v;
            for k in 0..n {
                out[k * n + c] = out[k * n + c] + rho[k * n + r] * w;
            }
        }
    }

    /// `out += A rho A^dagger` for row-major `rho`.
    pub fn sandwich_add(&self, rho: &[Complex<T>], out: &mut [Complex<T>]) {
        let n = self.dim;
        for &(a, c, v) in &self.entries {
            for &(b, d, w) in &self.entries {
                out[a * n + b] = out[a * n + b] + v * rho[c * n + d] * w.conj();
            }
        }
    }
}
