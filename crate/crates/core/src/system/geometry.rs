//! Van der Waals strengths, the dipole-dipole-force gradient term and the
//! superatom chain layout.

use std::collections::BTreeMap;

use crate::algebra::{pair_projector, Level, Operator, Space};
use crate::error::{Error, Result};
use crate::system::InteractionSpec;
use crate::C64;

/// `V = C6 / d^6`.
pub fn vdw_strength(c6: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::param("d", format!("distance must be positive, got {d}")));
    }
    Ok(c6 / d.powi(6))
}

/// `dV/dd` at `d_ideal`: `-6 C6 / d_ideal^7`.
pub fn vdw_gradient(c6: f64, d_ideal: f64) -> Result<f64> {
    if !(d_ideal > 0.0) || !d_ideal.is_finite() {
        return Err(Error::param("d_ideal", format!("distance must be positive, got {d_ideal}")));
    }
    Ok(-6.0 * c6 / d_ideal.powi(7))
}

/// Linearized shift of `|rr><rr|` when the pair sits at `d` instead of `d_ideal`.
pub fn ddf_coefficient(c6: f64, d_ideal: f64, d: f64) -> Result<f64> {
    Ok(vdw_gradient(c6, d_ideal)? * (d - d_ideal))
}

pub fn ddf_term(c6: f64, d_ideal: f64, d: f64, atoms: (usize, usize), space: &Space) -> Result<Operator<f64>> {
    let coeff = ddf_coefficient(c6, d_ideal, d)?;
    Ok(pair_projector::<f64>(Level::Ryd, Level::Ryd, atoms, space)?.scale(C64::new(coeff, 0.0)))
}

/// Three control atoms at `-R, 0, +R` and the target at `d_target` on a line.
///
/// Atoms are indexed `0..3` (controls) and `3` (target).
pub fn superatom_layout(radius: f64, d_target: f64, c6: f64) -> Result<InteractionSpec> {
    if !(radius > 0.0 && radius < d_target) {
        return Err(Error::param("radius", format!("need 0 < R < d_target, got R={radius}, d_target={d_target}")));
    }
    let positions = [-radius, 0.0, radius, d_target];
    let mut pairs = BTreeMap::new();
    for i in 0..4 {
        for j in i + 1..4 {
            pairs.insert((i, j), vdw_strength(c6, (positions[j] - positions[i]).abs())?);
        }
    }
    Ok(InteractionSpec { pairs, ddf: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LevelScheme;
    use crate::units::{mhz, TWO_PI};

    #[test]
    fn vdw_reference_strengths() {
        // 70S and 100S coefficients at their working distances.
        let v70 = vdw_strength(TWO_PI * 858.4e3, 4.8).unwrap() / TWO_PI;
        assert!((v70 - 70.18).abs() < 0.005, "{v70}");
        let v100 = vdw_strength(TWO_PI * 56.2e6, 9.6).unwrap() / TWO_PI;
        assert!((v100 - 71.79).abs() < 0.01, "{v100}");
    }

    #[test]
    fn vdw_power_law_and_errors() {
        let a = vdw_strength(3.0, 1.7).unwrap();
        let b = vdw_strength(3.0, 3.4).unwrap();
        assert!((b / a - 2f64.powi(-6)).abs() < 1e-15);
        assert!(vdw_strength(1.0, 0.0).is_err());
        assert!(vdw_strength(1.0, -1.0).is_err());
    }

    #[test]
    fn ddf_gradient_and_sign() {
        let c6 = mhz(858.4e3);
        let d_i = 4.8;
        let grad = vdw_gradient(c6, d_i).unwrap();
        let v = vdw_strength(c6, d_i).unwrap();
        assert!((grad - (-6.0 * v / d_i)).abs() / v < 1e-14);
        assert!((grad / TWO_PI + 87.7).abs() < 0.05, "{}", grad / TWO_PI);
        assert!(ddf_coefficient(c6, d_i, d_i + 0.01).unwrap() < 0.0);
        assert!(ddf_coefficient(c6, d_i, d_i - 0.01).unwrap() > 0.0);

        let space = crate::algebra::Space::uniform(2, LevelScheme::three_level());
        let zero = ddf_term(c6, d_i, d_i, (0, 1), &space).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        assert!(ddf_term(c6, 0.0, 1.0, (0, 1), &space).is_err());
    }

    #[test]
    fn superatom_layout_strengths() {
        let c6 = mhz(56.2e6);
        let spec = superatom_layout(0.015, 9.6, c6).unwrap();
        let v24 = spec.strength(1, 3);
        assert!((v24 / TWO_PI - 71.79).abs() < 0.01);
        let ratio = spec.strength(2, 3) / v24;
        assert!((ratio - (9.6f64 / 9.585).powi(6)).abs() < 1e-12);

        let tiny = superatom_layout(1e-9, 9.6, c6).unwrap();
        let (a, b, c) = (tiny.strength(0, 3), tiny.strength(1, 3), tiny.strength(2, 3));
        assert!((a - b).abs() / b < 1e-8 && (c - b).abs() / b < 1e-8);

        let r = 0.02;
        let near = superatom_layout(r / 2.0, 9.6, c6).unwrap();
        let far = superatom_layout(r, 9.6, c6).unwrap();
        assert!((near.strength(0, 1) / far.strength(0, 1) - 64.0).abs() < 1e-9);

        assert!(superatom_layout(0.0, 9.6, c6).is_err());
        assert!(superatom_layout(10.0, 9.6, c6).is_err());
    }
}
