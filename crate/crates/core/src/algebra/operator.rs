use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::scalar::{cis, Real};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for k in 0..dim {
            op[(k, k)] = Complex::new(T::one(), T::zero());
        }
        op
    }

    /// `|k><k|` in a `dim`-dimensional space.
    pub fn basis_projector(dim: usize, k: usize) -> Self {
        let mut op = Self::zeros(dim);
        op[(k, k)] = Complex::new(T::one(), T::zero());
        op
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    /// Wraps row-major data; panics if the length is not a perfect square of `dim`.
    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major data length");
        Self { dim, data }
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[T]) -> Self {
        let mut op = Self::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            op[(k, k)] = Complex::new(v, T::zero());
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] = out.data[r * n + c] + a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |r, c| self[(r / m, c / m)] * other[(r % m, c % m)])
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.dim, "apply dimension");
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + self[(k, k)])
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest entry of `|A - A^dagger|`.
    pub fn hermiticity_deviation(&self) -> T {
        let mut dev = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self[(r, c)].norm() == T::zero()))
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues_hermitian(&self) -> Vec<T> {
        T::hermitian_eigh(self.dim, &self.data).0
    }

    /// `exp(i * self * t)` for a Hermitian operator.
    pub fn exp_i_hermitian(&self, t: T) -> Self {
        let (vals, vecs) = T::hermitian_eigh(self.dim, &self.data);
        let n = self.dim;
        let phases: Vec<Complex<T>> = vals.iter().map(|&v| cis(v * t)).collect();
        Self::from_fn(n, |r, c| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + vecs[r * n + k] * phases[k] * vecs[c * n + k].conj()
            })
        })
    }

    /// Restriction to the listed basis indices (rows and columns).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), |r, c| self[(keep[r], keep[c])])
    }
}

impl<T> Index<(usize, usize)> for Operator<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Operator<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "add dimension");
        Operator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "sub dimension");
        Operator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: Self) -> Operator<T> {
        self.matmul(rhs)
    }
}
