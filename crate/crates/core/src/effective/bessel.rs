//! Integer-order Bessel functions of the first kind and the Jacobi-Anger
//! decomposition of a frequency-modulated drive.

use std::ops::RangeInclusive;

use num_complex::Complex;

use crate::algebra::Operator;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::timeop::{Envelope, Hamiltonian, Term};

/// Default magnitude below which Bessel sidebands are dropped.
pub const DEFAULT_BESSEL_CUTOFF: f64 = 1e-6;

/// `J_n(x)` for any integer `n` and real `x`, by Miller's downward recurrence
/// normalized with `J_0 + 2 sum_k J_2k = 1`.
pub fn bessel_j<T: Real>(n: i32, x: T) -> T {
    let order = n.unsigned_abs() as usize;
    let mut sign = if n < 0 && order % 2 == 1 { -T::one() } else { T::one() };
    if x < T::zero() && order % 2 == 1 {
        sign = -sign;
    }
    let ax = x.abs();
    if ax == T::zero() {
        return if order == 0 { T::one() } else { T::zero() };
    }
    let xf = ax.to_f64().unwrap_or(0.0);
    let start = {
        let base = order.max(xf.ceil() as usize);
        let m = base + 30 + (40.0 * base.max(1) as f64).sqrt() as usize;
        m + m % 2
    };
    let two_over_x = T::lit(2.0) / ax;
    let big = T::lit(1e200);
    let (mut jp, mut j) = (T::zero(), T::min_positive_value().max(T::lit(1e-30)));
    let mut value = T::zero();
    let mut norm = T::zero();
    for k in (1..=start).rev() {
        let jm = T::from_usize(k).unwrap() * two_over_x * j - jp;
        jp = j;
        j = jm;
        if j.abs() > big {
            j = j / big;
            jp = jp / big;
            value = value / big;
            norm = norm / big;
        }
        let idx = k - 1;
        if idx % 2 == 0 && idx > 0 {
            norm = norm + T::lit(2.0) * j;
        }
        if idx == order {
            value = j;
        }
    }
    norm = norm + j;
    sign * value / norm
}

/// One sideband of the expanded drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselField<T> {
    pub order: i32,
    /// `Ω2 J_n(Δ̄/ω̄)`.
    pub rabi: T,
    /// `Δ0 + n ω̄`.
    pub detuning: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesselDecomposition<T> {
    pub fields: Vec<BesselField<T>>,
    /// `n* = -Δ0/ω̄` when it is an integer.
    pub resonance: Option<i32>,
}

impl<T: Real> BesselDecomposition<T> {
    pub fn field(&self, order: i32) -> Option<&BesselField<T>> {
        self.fields.iter().find(|f| f.order == order)
    }

    /// Orders whose `|rabi| >= threshold * |Ω2|`.
    pub fn significant_orders(&self, omega2: T, threshold: T) -> Vec<i32> {
        self.fields.iter().filter(|f| f.rabi.abs() >= threshold * omega2.abs()).map(|f| f.order).collect()
    }

    /// `(Ω2/2) sum_n J_n e^{i(Δ0 + n ω̄)t} |1><0| + H.c.` on the pair
    /// `{|01>, |0r>}` in the frame co-rotating with the detuning.
    pub fn hamiltonian(&self) -> Hamiltonian<T> {
        let half = T::lit(0.5);
        let phasors: Vec<(Complex<T>, T)> =
            self.fields.iter().map(|f| (Complex::new(f.rabi * half, T::zero()), f.detuning)).collect();
        let mut op = Operator::zeros(2);
        op[(1, 0)] = Complex::new(T::one(), T::zero());
        let mut h = Hamiltonian::new(2);
        h.add_term(Term::with_conjugate(Envelope::Phasors(phasors), T::zero(), &op));
        h
    }
}

pub fn bessel_decompose<T: Real>(
    omega2: T,
    delta0: T,
    delta_bar: T,
    omega_bar: T,
    orders: RangeInclusive<i32>,
) -> Result<BesselDecomposition<T>> {
    if !(omega_bar > T::zero()) {
        return Err(Error::param("omega_bar", "must be positive"));
    }
    let x = delta_bar / omega_bar;
    let fields = orders
        .map(|n| BesselField {
            order: n,
            rabi: omega2 * bessel_j(n, x),
            detuning: delta0 + T::from_i32(n).unwrap() * omega_bar,
        })
        .collect();
    let ratio = -delta0 / omega_bar;
    let nearest = ratio.round();
    let tol = T::lit(1e-9) * (T::one() + ratio.abs());
    let resonance = if (ratio - nearest).abs() <= tol { nearest.to_i32() } else { None };
    Ok(BesselDecomposition { fields, resonance })
}

/// Smallest window `[lo, hi]` containing every order with `|J_n(x)| >= cutoff`.
pub fn bessel_window<T: Real>(x: T, cutoff: T) -> RangeInclusive<i32> {
    let limit = (x.abs().to_f64().unwrap_or(0.0).ceil() as i32 + 40).max(40);
    let hits: Vec<i32> = (-limit..=limit).filter(|&n| bessel_j(n, x).abs() >= cutoff).collect();
    match (hits.first(), hits.last()) {
        (Some(&lo), Some(&hi)) => lo..=hi,
        _ => 0..=0,
    }
}

/// Decomposition over every order with `|J_n(Δ̄/ω̄)| >= cutoff`.
pub fn bessel_decompose_truncated<T: Real>(
    omega2: T,
    delta0: T,
    delta_bar: T,
    omega_bar: T,
    cutoff: T,
) -> Result<BesselDecomposition<T>> {
    if !(omega_bar > T::zero()) {
        return Err(Error::param("omega_bar", "must be positive"));
    }
    let window = bessel_window(delta_bar / omega_bar, cutoff);
    let mut d = bessel_decompose(omega2, delta0, delta_bar, omega_bar, window)?;
    d.fields.retain(|f| f.rabi.abs() >= cutoff * omega2.abs());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// `J_n(x) = (1/π) ∫_0^π cos(nτ - x sin τ) dτ` by the trapezoid rule,
    /// which is spectrally accurate for this periodic integrand.
    fn integral_oracle(n: i32, x: f64) -> f64 {
        let m = 4096;
        let h = PI / m as f64;
        let f = |tau: f64| (n as f64 * tau - x * tau.sin()).cos();
        let mut s = 0.5 * (f(0.0) + f(PI));
        for k in 1..m {
            s += f(k as f64 * h);
        }
        s * h / PI
    }

    #[test]
    fn matches_integral_representation() {
        for &x in &[0.1, 1.0, 2.5, 7.3, 12.0, 19.9, 30.0] {
            for n in -60..=60 {
                let a = bessel_j(n, x);
                let b = integral_oracle(n, x);
                assert!((a - b).abs() < 1e-12, "J_{n}({x}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn symmetries_and_zero() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        for n in 0..8 {
            let x: f64 = 4.2;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((bessel_j(-n, x) - sgn * bessel_j(n, x)).abs() < 1e-15);
            assert!((bessel_j(n, -x) - sgn * bessel_j(n, x)).abs() < 1e-15);
        }
        assert!((bessel_j(10, 12.0f64) - 0.300_476_035_271_269_2).abs() < 1e-13);
        let f: f32 = bessel_j(1, 2.0f32);
        assert!((f - 0.576_724_8).abs() < 1e-5);
    }

    #[test]
    fn jacobi_anger_reconstruction() {
        let x = 12.0;
        let w = 0.5;
        for k in 0..64 {
            let t = k as f64 * (2.0 * PI / w) / 64.0;
            let sum: Complex<f64> = (-60..=60)
                .map(|n| Complex::from_polar(bessel_j(n, x), n as f64 * w * t))
                .sum();
            let exact = Complex::from_polar(1.0, x * (w * t).sin());
            assert!((sum - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn lzs_decomposition() {
        let d = bessel_decompose(1.0f64, 5.0, 6.0, 0.5, -40..=40).unwrap();
        assert_eq!(d.resonance, Some(-10));
        let res = d.field(-10).unwrap();
        assert!((res.rabi.abs() - 0.3).abs() < 1e-3);
        assert!(res.detuning.abs() < 1e-15);
        let significant = d.significant_orders(1.0, 1e-3);
        assert_eq!(*significant.first().unwrap(), -18);
        assert_eq!(*significant.last().unwrap(), 18);

        let none = bessel_decompose(1.0, 0.3, 0.0, 0.5, -5..=5).unwrap();
        assert_eq!(none.resonance, None);
        assert_eq!(none.significant_orders(1.0, 1e-12), vec![0]);
        assert_eq!(none.field(0).unwrap().rabi, 1.0);
        assert!(bessel_decompose(1.0, 0.0, 1.0, 0.0, 0..=1).is_err());
    }

    #[test]
    fn truncated_window() {
        let d = bessel_decompose_truncated(1.0, 5.0, 6.0, 0.5, DEFAULT_BESSEL_CUTOFF).unwrap();
        assert!(d.fields.iter().all(|f| f.rabi.abs() >= 1e-6));
        assert!(d.field(-10).is_some());
        assert_eq!(bessel_window(0.0, 1e-6), 0..=0);
    }
}
