//! Vector and tensor polarizabilities and resonant cross-sections of a
//! hyperfine transition manifold, with the alkali sum rule as a built-in
//! diagnostic.
//!
//! Conventions: frequencies (linewidth, level offsets) are plain MHz; only
//! ratios of frequencies ever enter downstream couplings, so no angular
//! conversion happens anywhere. Lengths are meters.

use crate::half::HalfInt;
use crate::wigner::wigner6j;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ManifoldError {
    #[error("excited level f' = {f_excited} is not in {{F-1, F, F+1}} for F = {f_ground}")]
    ExcitedOutOfRange { f_ground: HalfInt, f_excited: HalfInt },
    #[error("triangle rule violated for (j = {j}, i = {i}, f = {f})")]
    TriangleViolation { j: HalfInt, i: HalfInt, f: HalfInt },
    #[error("level offsets must be strictly increasing")]
    NonIncreasingOffsets,
    #[error("{quantity} must be positive, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },
    #[error("manifold needs at least one excited level")]
    NoExcitedLevels,
}

/// One excited hyperfine level, at a frequency offset (MHz) above the lowest
/// excited level of the manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitedLevel {
    pub f: HalfInt,
    pub offset_mhz: f64,
}

/// A ground hyperfine level and the excited multiplet it couples to.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionManifold {
    pub ground_f: HalfInt,
    pub j_ground: HalfInt,
    pub j_excited: HalfInt,
    pub nuclear_i: HalfInt,
    pub wavelength_m: f64,
    pub gamma_mhz: f64,
    pub excited_levels: Vec<ExcitedLevel>,
}

impl TransitionManifold {
    pub fn new(
        ground_f: HalfInt,
        j_ground: HalfInt,
        j_excited: HalfInt,
        nuclear_i: HalfInt,
        wavelength_m: f64,
        gamma_mhz: f64,
        excited_levels: Vec<ExcitedLevel>,
    ) -> Result<Self, ManifoldError> {
        if wavelength_m <= 0.0 {
            return Err(ManifoldError::NonPositive { quantity: "wavelength", value: wavelength_m });
        }
        if gamma_mhz <= 0.0 {
            return Err(ManifoldError::NonPositive { quantity: "gamma", value: gamma_mhz });
        }
        if excited_levels.is_empty() {
            return Err(ManifoldError::NoExcitedLevels);
        }
        if !HalfInt::triangle(j_ground, nuclear_i, ground_f) {
            return Err(ManifoldError::TriangleViolation { j: j_ground, i: nuclear_i, f: ground_f });
        }
        for level in &excited_levels {
            let df = (level.f.twice() - ground_f.twice()).abs();
            if df > 2 || level.f.twice() < 0 {
                return Err(ManifoldError::ExcitedOutOfRange {
                    f_ground: ground_f,
                    f_excited: level.f,
                });
            }
            if !HalfInt::triangle(j_excited, nuclear_i, level.f) {
                return Err(ManifoldError::TriangleViolation {
                    j: j_excited,
                    i: nuclear_i,
                    f: level.f,
                });
            }
        }
        if !excited_levels.windows(2).all(|w| w[0].offset_mhz < w[1].offset_mhz) {
            return Err(ManifoldError::NonIncreasingOffsets);
        }
        Ok(TransitionManifold {
            ground_f,
            j_ground,
            j_excited,
            nuclear_i,
            wavelength_m,
            gamma_mhz,
            excited_levels,
        })
    }

    /// Lowest excited level, the reference of all detunings.
    pub fn base_offset_mhz(&self) -> f64 {
        self.excited_levels[0].offset_mhz
    }
}

fn branch_check(f: HalfInt, f_exc: HalfInt) -> Result<i32, ManifoldError> {
    let df = f_exc.twice() - f.twice();
    if !(-2..=2).contains(&df) || df % 2 != 0 || f_exc.twice() < 0 {
        return Err(ManifoldError::ExcitedOutOfRange { f_ground: f, f_excited: f_exc });
    }
    Ok(df / 2)
}

/// Vector polarizability alpha_V^{F'} of the F -> F' line.
pub fn alpha_vector(f: HalfInt, f_exc: HalfInt, j: HalfInt, j_exc: HalfInt) -> Result<f64, ManifoldError> {
    let df = branch_check(f, f_exc)?;
    let fv = f.value();
    let branch = match df {
        -1 => -(2.0 * fv - 1.0) / fv,
        0 => -(2.0 * fv + 1.0) / (fv * (fv + 1.0)),
        1 => (2.0 * fv + 3.0) / (fv + 1.0),
        _ => unreachable!(),
    };
    let pre = 3.0 * (j_exc.twice() as f64 + 1.0)
        / (2.0 * (f_exc.twice() as f64 + 1.0) * (j.twice() as f64 + 1.0));
    Ok(pre * branch)
}

/// Tensor polarizability alpha_T^{F'} of the F -> F' line.
pub fn alpha_tensor(f: HalfInt, f_exc: HalfInt, j: HalfInt, j_exc: HalfInt) -> Result<f64, ManifoldError> {
    let df = branch_check(f, f_exc)?;
    let fv = f.value();
    let branch = match df {
        -1 => 1.0 / fv,
        0 => -(2.0 * fv + 1.0) / (fv * (fv + 1.0)),
        1 => 1.0 / (fv + 1.0),
        _ => unreachable!(),
    };
    let pre = -3.0 * (fv + 1.0) * (j_exc.twice() as f64 + 1.0)
        / (2.0 * (f_exc.twice() as f64 + 1.0) * (j.twice() as f64 + 1.0));
    Ok(pre * branch)
}

/// Two-level resonant cross-section 3 lambda^2 / 2 pi (m^2).
pub fn sigma_two_level(wavelength_m: f64) -> f64 {
    3.0 * wavelength_m * wavelength_m / (2.0 * PI)
}

/// Resonant cross-section of the F -> F' line for an isotropically populated
/// ground state:
///
///   sigma_{F'} = sigma_2level * (2 (2J+1)(2F'+1) / 3) * {J' 1 J; F I F'}^2
///
/// Forbidden lines give 0.0 (the 6-j vanishes); `build_table` flags them.
pub fn cross_section(
    f: HalfInt,
    f_exc: HalfInt,
    j: HalfInt,
    j_exc: HalfInt,
    i: HalfInt,
    wavelength_m: f64,
) -> f64 {
    let one = HalfInt::from_int(1);
    let sixj = wigner6j(j_exc, one, j, f, i, f_exc);
    let weight = 2.0 * (j.twice() as f64 + 1.0) * (f_exc.twice() as f64 + 1.0) / 3.0;
    sigma_two_level(wavelength_m) * weight * sixj * sixj
}

/// One row of a polarizability table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineEntry {
    pub f_excited: HalfInt,
    pub offset_mhz: f64,
    pub alpha_v: f64,
    pub alpha_t: f64,
    pub sigma_m2: f64,
    /// True when the line is dipole-forbidden (sigma = 0).
    pub forbidden: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizabilityTable {
    pub lines: Vec<LineEntry>,
    pub sigma_two_level_m2: f64,
}

impl PolarizabilityTable {
    /// Alkali sum rule Sum_{F'} sigma_{F'} alpha_T^{F'}; zero over a complete
    /// F' = F-1, F, F+1 multiplet. Returned relative to Sum |sigma alpha_T|.
    pub fn sum_rule_residual(&self) -> f64 {
        let sum: f64 = self.lines.iter().map(|l| l.sigma_m2 * l.alpha_t).sum();
        let scale: f64 = self.lines.iter().map(|l| (l.sigma_m2 * l.alpha_t).abs()).sum();
        if scale == 0.0 {
            0.0
        } else {
            sum / scale
        }
    }
}

/// Evaluates every line of the manifold.
pub fn build_table(manifold: &TransitionManifold) -> Result<PolarizabilityTable, ManifoldError> {
    let mut lines = Vec::with_capacity(manifold.excited_levels.len());
    for level in &manifold.excited_levels {
        let alpha_v = alpha_vector(manifold.ground_f, level.f, manifold.j_ground, manifold.j_excited)?;
        let alpha_t = alpha_tensor(manifold.ground_f, level.f, manifold.j_ground, manifold.j_excited)?;
        let sigma_m2 = cross_section(
            manifold.ground_f,
            level.f,
            manifold.j_ground,
            manifold.j_excited,
            manifold.nuclear_i,
            manifold.wavelength_m,
        );
        lines.push(LineEntry {
            f_excited: level.f,
            offset_mhz: level.offset_mhz,
            alpha_v,
            alpha_t,
            sigma_m2,
            forbidden: sigma_m2 == 0.0,
        });
    }
    Ok(PolarizabilityTable { lines, sigma_two_level_m2: sigma_two_level(manifold.wavelength_m) })
}
