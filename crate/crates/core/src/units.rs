//! Unit conventions.
//!
//! Internally time is in microseconds, angular frequencies in rad/µs and
//! lengths in micrometres. A frequency quoted as `f/2π = x MHz` is therefore
//! `mhz(x)` rad/µs.

pub use std::f64::consts::PI;
pub const TWO_PI: f64 = 2.0 * PI;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;
/// Mass of a ⁸⁷Rb atom, kg.
pub const RB87_MASS: f64 = 1.44316e-25;
/// Effective wave vector of the counterpropagating 420 nm / 1013 nm pair, 1/m.
pub const K_EFF_RB87: f64 = 8.76e6;

/// `C6/2π` of the 70S state, MHz·µm⁶.
pub const C6_70S_MHZ: f64 = 858.4e3;
/// `C6/2π` of the 100S state, MHz·µm⁶.
pub const C6_100S_MHZ: f64 = 56.2e6;

/// `2π × x MHz` in rad/µs.
pub fn mhz(x: f64) -> f64 {
    TWO_PI * x
}

/// Angular frequency in rad/µs back to `f/2π` in MHz.
pub fn to_mhz(w: f64) -> f64 {
    w / TWO_PI
}

/// Rad/s to rad/µs.
pub fn per_second(w: f64) -> f64 {
    w * 1e-6
}
