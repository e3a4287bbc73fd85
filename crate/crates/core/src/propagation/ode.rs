//! Explicit Runge–Kutta drivers over complex state vectors.

use num_complex::Complex;

use super::IntegratorConfig;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct IntegratorStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// Step cap in force, in the time unit of the Hamiltonian (µs for physical scenarios).
    pub step_cap: f64,
}

type C<T> = Complex<T>;

fn zeros<T: Real>(n: usize) -> Vec<C<T>> {
    vec![Complex::new(T::zero(), T::zero()); n]
}

/// Sorted checkpoints: segment boundaries from breakpoints plus the final sample.
fn segments<T: Real>(cfg: &IntegratorConfig<T>, breakpoints: &[T]) -> Vec<T> {
    let t_end = *cfg.sample_times.last().unwrap();
    let mut ends: Vec<T> = breakpoints.iter().copied().filter(|&b| b > cfg.t_start && b < t_end).collect();
    ends.push(t_end);
    ends.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ends.dedup();
    ends
}

/// Records `y` for every pending sample equal to `t` (up to rounding).
fn emit_exact<T: Real>(cfg: &IntegratorConfig<T>, next: &mut usize, t: T, y: &[C<T>], out: &mut Vec<Vec<C<T>>>) {
    while *next < cfg.sample_times.len() && cfg.sample_times[*next] <= t {
        out.push(y.to_vec());
        *next += 1;
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Continuous extension (Hairer & Wanner, DOPRI5 `contd5`).
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Coeffs<T> {
    c: [T; 4],
    a: [[T; 6]; 6],
    e: [T; 6],
    d: [T; 6],
}

impl<T: Real> Coeffs<T> {
    fn new() -> Self {
        let l = T::lit;
        let z = T::zero();
        Self {
            c: [l(C2), l(C3), l(C4), l(C5)],
            a: [
                [l(A21), z, z, z, z, z],
                [l(A31), l(A32), z, z, z, z],
                [l(A41), l(A42), l(A43), z, z, z],
                [l(A51), l(A52), l(A53), l(A54), z, z],
                [l(A61), l(A62), l(A63), l(A64), l(A65), z],
                [l(A71), z, l(A73), l(A74), l(A75), l(A76)],
            ],
            e: [l(E1), l(E3), l(E4), l(E5), l(E6), l(E7)],
            d: [l(D1), l(D3), l(D4), l(D5), l(D6), l(D7)],
        }
    }
}

pub(super) fn dopri5<T: Real>(
    mut f: impl FnMut(T, &[C<T>], &mut [C<T>]),
    y0: Vec<C<T>>,
    cfg: &IntegratorConfig<T>,
    breakpoints: &[T],
    cap: T,
) -> Result<(Vec<Vec<C<T>>>, IntegratorStats)> {
    let n = y0.len();
    let k = Coeffs::<T>::new();
    let mut stats = IntegratorStats { step_cap: cap.to_f64().unwrap_or(f64::NAN), ..Default::default() };
    let mut out = Vec::with_capacity(cfg.sample_times.len());
    let mut next = 0;

    let mut t = cfg.t_start;
    let mut y = y0;
    emit_exact(cfg, &mut next, t, &y, &mut out);

    let mut ks: Vec<Vec<C<T>>> = (0..7).map(|_| zeros(n)).collect();
    let mut tmp = zeros::<T>(n);
    let mut y_new = zeros::<T>(n);
    let mut h = cap;

    let safety = T::lit(0.9);
    let min_fac = T::lit(0.2);
    let max_fac = T::lit(5.0);
    let fifth = T::lit(0.2);
    let one = T::one();

    for seg_end in segments(cfg, breakpoints) {
        // FSAL restarts at every discontinuity.
        f(t, &y, &mut ks[0]);
        stats.rhs_evaluations += 1;
        let mut last_rejected = false;

        while t < seg_end {
            if stats.accepted_steps + stats.rejected_steps >= cfg.max_steps {
                return Err(Error::ToleranceNotMet { t: t.to_f64().unwrap_or(f64::NAN), steps: cfg.max_steps });
            }
            h = h.min(cap);
            let remaining = seg_end - t;
            let land = h >= remaining * T::lit(0.999);
            if land {
                h = remaining;
            }

            for s in 0..6 {
                for i in 0..n {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for (j, kj) in ks.iter().enumerate().take(s + 1) {
                        let a = k.a[s][j];
                        if a != T::zero() {
                            acc = acc + kj[i] * a;
                        }
                    }
                    tmp[i] = y[i] + acc * h;
                }
                let ts = if s < 4 { t + k.c[s] * h } else { t + h };
                if s == 5 {
                    y_new.copy_from_slice(&tmp);
                    f(ts, &y_new, &mut ks[6]);
                } else {
                    f(ts, &tmp, &mut ks[s + 1]);
                }
                stats.rhs_evaluations += 1;
            }

            // Error estimate with mixed absolute/relative scaling.
            let mut err_sq = T::zero();
            for i in 0..n {
                let e = ks[0][i] * k.e[0]
                    + ks[2][i] * k.e[1]
                    + ks[3][i] * k.e[2]
                    + ks[4][i] * k.e[3]
                    + ks[5][i] * k.e[4]
                    + ks[6][i] * k.e[5];
                let sc = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
                let r = (e * h).norm() / sc;
                err_sq = err_sq + r * r;
            }
            let err = (err_sq / T::from_usize(n.max(1)).unwrap()).sqrt();

            if err <= one {
                let t_new = if land { seg_end } else { t + h };
                // Dense output for samples strictly inside the step.
                if next < cfg.sample_times.len() && cfg.sample_times[next] < t_new {
                    let mut r5 = zeros::<T>(n);
                    for i in 0..n {
                        r5[i] = (ks[0][i] * k.d[0]
                            + ks[2][i] * k.d[1]
                            + ks[3][i] * k.d[2]
                            + ks[4][i] * k.d[3]
                            + ks[5][i] * k.d[4]
                            + ks[6][i] * k.d[5])
                            * h;
                    }
                    while next < cfg.sample_times.len() && cfg.sample_times[next] < t_new {
                        let theta = (cfg.sample_times[next] - t) / h;
                        let theta1 = one - theta;
                        let sample: Vec<C<T>> = (0..n)
                            .map(|i| {
                                let ydiff = y_new[i] - y[i];
                                let bspl = ks[0][i] * h - ydiff;
                                let r4 = ydiff - ks[6][i] * h - bspl;
                                y[i] + (ydiff + (bspl + (r4 + r5[i] * theta1) * theta) * theta1) * theta
                            })
                            .collect();
                        out.push(sample);
                        next += 1;
                    }
                }
                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                ks.swap(0, 6);
                stats.accepted_steps += 1;
                emit_exact(cfg, &mut next, t, &y, &mut out);

                let mut fac = if err > T::zero() { safety * err.powf(-fifth) } else { max_fac };
                fac = fac.min(max_fac).max(min_fac);
                if last_rejected {
                    fac = fac.min(one);
                }
                h = h * fac;
                last_rejected = false;
            } else {
                stats.rejected_steps += 1;
                let fac = if err.is_finite() { (safety * err.powf(-fifth)).max(min_fac).min(one) } else { min_fac };
                h = h * fac;
                last_rejected = true;
                if h <= T::tiny_step() * t.abs().max(cap) {
                    return Err(Error::StepUnderflow { t: t.to_f64().unwrap_or(f64::NAN) });
                }
            }
        }
    }
    while next < cfg.sample_times.len() {
        out.push(y.clone());
        next += 1;
    }
    Ok((out, stats))
}

pub(super) fn rk4<T: Real>(
    mut f: impl FnMut(T, &[C<T>], &mut [C<T>]),
    y0: Vec<C<T>>,
    cfg: &IntegratorConfig<T>,
    breakpoints: &[T],
    cap: T,
) -> Result<(Vec<Vec<C<T>>>, IntegratorStats)> {
    let n = y0.len();
    let mut stats = IntegratorStats { step_cap: cap.to_f64().unwrap_or(f64::NAN), ..Default::default() };
    let mut out = Vec::with_capacity(cfg.sample_times.len());
    let mut next = 0;
    let mut t = cfg.t_start;
    let mut y = y0;
    emit_exact(cfg, &mut next, t, &y, &mut out);

    let mut stops: Vec<T> = cfg.sample_times.iter().copied().filter(|&s| s > t).collect();
    stops.extend(segments(cfg, breakpoints));
    stops.sort_by(|a, b| a.partial_cmp(b).unwrap());
    stops.dedup();

    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (zeros::<T>(n), zeros::<T>(n), zeros::<T>(n), zeros::<T>(n), zeros::<T>(n));
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);

    for stop in stops {
        let span = stop - t;
        if span <= T::zero() {
            continue;
        }
        let steps = (span / cap).ceil().to_usize().unwrap_or(1).max(1);
        if stats.accepted_steps + steps > cfg.max_steps {
            return Err(Error::ToleranceNotMet { t: t.to_f64().unwrap_or(f64::NAN), steps: cfg.max_steps });
        }
        let h = span / T::from_usize(steps).unwrap();
        let t0 = t;
        for s in 0..steps {
            let ts = t0 + h * T::from_usize(s).unwrap();
            f(ts, &y, &mut k1);
            for i in 0..n {
                tmp[i] = y[i] + k1[i] * (h * half);
            }
            f(ts + h * half, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = y[i] + k2[i] * (h * half);
            }
            f(ts + h * half, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = y[i] + k3[i] * h;
            }
            f(ts + h, &tmp, &mut k4);
            for i in 0..n {
                y[i] = y[i] + (k1[i] + k2[i] * two + k3[i] * two + k4[i]) * (h * sixth);
            }
            stats.rhs_evaluations += 4;
            stats.accepted_steps += 1;
        }
        t = stop;
        emit_exact(cfg, &mut next, t, &y, &mut out);
    }
    while next < cfg.sample_times.len() {
        out.push(y.clone());
        next += 1;
    }
    Ok((out, stats))
}
