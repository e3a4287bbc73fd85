//! Scalar abstraction shared by the operator algebra, the integrators and the
//! special functions.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar used throughout the crate.
///
/// Hermitian diagonalization is routed through this trait so that generic code
/// never has to mix `num_traits::Float` with `nalgebra::RealField` method sets.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + std::fmt::LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Machine-precision-scaled tolerance for step underflow checks.
    fn tiny_step() -> Self;

    /// Eigen-decomposition of a Hermitian matrix stored row-major.
    ///
    /// Returns ascending eigenvalues and the eigenvectors as columns of a
    /// row-major `dim x dim` array.
    fn hermitian_eigh(dim: usize, data: &[Complex<Self>]) -> (Vec<Self>, Vec<Complex<Self>>);

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn tiny_step() -> Self {
                <$t>::EPSILON * 64.0
            }

            fn hermitian_eigh(dim: usize, data: &[Complex<Self>]) -> (Vec<Self>, Vec<Complex<Self>>) {
                let m = DMatrix::from_fn(dim, dim, |r, c| {
                    // Symmetrize to kill rounding asymmetry before the solver sees it.
                    (data[r * dim + c] + data[c * dim + r].conj()) * (0.5 as $t)
                });
                let eig = SymmetricEigen::new(m);
                let mut order: Vec<usize> = (0..dim).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
                let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
                let mut vectors = vec![Complex::new(0.0, 0.0); dim * dim];
                for (col, &k) in order.iter().enumerate() {
                    for r in 0..dim {
                        vectors[r * dim + col] = eig.eigenvectors[(r, k)];
                    }
                }
                (values, vectors)
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// `i` as a complex scalar.
#[inline]
pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{i phi}`.
#[inline]
pub fn cis<T: Real>(phi: T) -> Complex<T> {
    Complex::new(phi.cos(), phi.sin())
}
