//! Scalar coupling strengths, spontaneous-emission noise parameters,
//! detuning sweeps and zero-crossing finding.
//!
//! All detunings are signed, in MHz, measured from the lowest excited level
//! of the manifold. Normalized detunings divide by the half linewidth.

use crate::polarizability::{build_table, ManifoldError, PolarizabilityTable, TransitionManifold};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CouplingError {
    #[error("probe exactly resonant with the f' = {f_excited} level (detuning {detuning_mhz} MHz)")]
    OnResonance { f_excited: String, detuning_mhz: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("noise model needs at least two excited levels")]
    SingleLevelManifold,
    #[error("{name} = {value} outside [0, 1): noise model breaks down at this detuning")]
    NoiseOutOfRange { name: &'static str, value: f64 },
    #[error("no sign change over [{lo} MHz, {hi} MHz]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    pub atoms_n: f64,
    pub photons_n: f64,
    pub beam_area_m2: f64,
    pub pulse_duration_s: f64,
    /// Probe detuning from the lowest excited level, MHz, signed.
    pub probe_detuning_mhz: f64,
    pub manifold: TransitionManifold,
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<(), CouplingError> {
        if !(self.atoms_n >= 0.0) || !(self.photons_n >= 0.0) {
            return Err(CouplingError::InvalidParams(format!(
                "atom and photon numbers must be non-negative, got N = {}, n = {}",
                self.atoms_n, self.photons_n
            )));
        }
        if !(self.beam_area_m2 > 0.0) {
            return Err(CouplingError::InvalidParams(format!(
                "beam area must be positive, got {} m^2",
                self.beam_area_m2
            )));
        }
        if !(self.pulse_duration_s > 0.0) {
            return Err(CouplingError::InvalidParams(format!(
                "pulse duration must be positive, got {} s",
                self.pulse_duration_s
            )));
        }
        for (f, d) in self.detunings() {
            if d == 0.0 {
                return Err(CouplingError::OnResonance {
                    f_excited: f.to_string(),
                    detuning_mhz: self.probe_detuning_mhz,
                });
            }
        }
        Ok(())
    }

    /// Signed detuning from each excited level, in manifold order.
    pub fn detunings(&self) -> Vec<(crate::half::HalfInt, f64)> {
        let base = self.manifold.base_offset_mhz();
        self.manifold
            .excited_levels
            .iter()
            .map(|l| (l.f, self.probe_detuning_mhz - (l.offset_mhz - base)))
            .collect()
    }

    fn with_detuning(&self, delta_mhz: f64) -> ExperimentParams {
        ExperimentParams { probe_detuning_mhz: delta_mhz, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingSet {
    pub kappa_v: f64,
    pub kappa_t: f64,
    /// Single-pass values; double-pass and double-cell geometries double them.
    pub eps_a: f64,
    pub eps_p: f64,
    pub eps_prime: f64,
    pub saturation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub eps_a: f64,
    pub eps_p: f64,
    pub eps_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Vector,
    Tensor,
}

fn weighted_sum(
    table: &PolarizabilityTable,
    base_offset: f64,
    delta0_mhz: f64,
    kind: CouplingKind,
    levels: usize,
) -> f64 {
    table
        .lines
        .iter()
        .take(levels)
        .map(|l| {
            let d = delta0_mhz - (l.offset_mhz - base_offset);
            let a = match kind {
                CouplingKind::Vector => l.alpha_v,
                CouplingKind::Tensor => l.alpha_t,
            };
            a * l.sigma_m2 / d
        })
        .sum()
}

fn kappa_from_table(
    params: &ExperimentParams,
    table: &PolarizabilityTable,
    kind: CouplingKind,
    levels: usize,
) -> f64 {
    let gamma = params.manifold.gamma_mhz;
    let area = params.beam_area_m2;
    let sum = weighted_sum(
        table,
        params.manifold.base_offset_mhz(),
        params.probe_detuning_mhz,
        kind,
        levels,
    );
    match kind {
        CouplingKind::Vector => {
            (params.atoms_n * params.photons_n / 2.0).sqrt() * gamma / (4.0 * area) * sum
        }
        CouplingKind::Tensor => {
            (params.atoms_n * params.photons_n).sqrt() * gamma / (8.0 * area) * sum
        }
    }
}

/// Vectorial (Faraday) coupling strength, summed over the manifold.
pub fn kappa_vector(params: &ExperimentParams) -> Result<f64, CouplingError> {
    params.validate()?;
    let table = build_table(&params.manifold)?;
    Ok(kappa_from_table(params, &table, CouplingKind::Vector, table.lines.len()))
}

/// Tensorial (alignment) coupling strength, summed over the manifold.
pub fn kappa_tensor(params: &ExperimentParams) -> Result<f64, CouplingError> {
    params.validate()?;
    let table = build_table(&params.manifold)?;
    Ok(kappa_from_table(params, &table, CouplingKind::Tensor, table.lines.len()))
}

/// Spontaneous-emission parameters of the two-level-pair model: the coupling
/// built from the lowest two excited levels, with detunings Delta_0 and
/// Delta_1 to those levels:
///
///   eps_a  =  kappa Gamma/2 sqrt(n/N) (1/Delta_1 - 1/Delta_0)
///   eps_p  =  kappa Gamma/2 sqrt(N/n) (1/Delta_1 - 1/Delta_0)
///   eps'   = -kappa Gamma/4           (1/Delta_1 + 1/Delta_0)
///
/// Values are per pass; double-pass and double-cell geometries double all
/// three. `include_highest` folds every level of the manifold into the
/// kappa prefactor instead of the lowest pair (sensitivity analysis).
pub fn noise_params_with(
    params: &ExperimentParams,
    include_highest: bool,
) -> Result<NoiseParams, CouplingError> {
    params.validate()?;
    if params.manifold.excited_levels.len() < 2 {
        return Err(CouplingError::SingleLevelManifold);
    }
    if params.atoms_n == 0.0 || params.photons_n == 0.0 {
        return Ok(NoiseParams { eps_a: 0.0, eps_p: 0.0, eps_prime: 0.0 });
    }
    let table = build_table(&params.manifold)?;
    let levels = if include_highest { table.lines.len() } else { 2 };
    let kappa = kappa_from_table(params, &table, CouplingKind::Tensor, levels);
    let gamma = params.manifold.gamma_mhz;
    let base = params.manifold.base_offset_mhz();
    let d0 = params.probe_detuning_mhz;
    let d1 = params.probe_detuning_mhz - (params.manifold.excited_levels[1].offset_mhz - base);
    let diff = 1.0 / d1 - 1.0 / d0;
    let ratio = (params.photons_n / params.atoms_n).sqrt();
    Ok(NoiseParams {
        eps_a: kappa * gamma / 2.0 * ratio * diff,
        eps_p: kappa * gamma / 2.0 / ratio * diff,
        eps_prime: -kappa * gamma / 4.0 * (1.0 / d1 + 1.0 / d0),
    })
}

pub fn noise_params(params: &ExperimentParams) -> Result<NoiseParams, CouplingError> {
    noise_params_with(params, false)
}

/// Saturation parameter, a diagnostic of how far the linear (dispersive)
/// model can be trusted; the resonant term of each line is weighted by its
/// Lorentzian at the probe detuning.
pub fn saturation(params: &ExperimentParams) -> Result<f64, CouplingError> {
    params.validate()?;
    let table = build_table(&params.manifold)?;
    let gamma = params.manifold.gamma_mhz;
    let gamma_rad = 2.0 * std::f64::consts::PI * gamma * 1e6;
    let flux = params.photons_n / (params.beam_area_m2 * params.pulse_duration_s);
    let base = params.manifold.base_offset_mhz();
    Ok(table
        .lines
        .iter()
        .map(|l| {
            let d = params.probe_detuning_mhz - (l.offset_mhz - base);
            let lorentz = 1.0 + (2.0 * d / gamma).powi(2);
            2.0 * l.sigma_m2 * flux / gamma_rad / lorentz
        })
        .sum())
}

/// Every scalar the scenarios need, in one pass. Rejects detunings where the
/// noise model leaves its domain of validity (eps outside [0, 1)).
pub fn coupling_set(params: &ExperimentParams) -> Result<CouplingSet, CouplingError> {
    coupling_set_with(params, false)
}

pub fn coupling_set_with(
    params: &ExperimentParams,
    noise_includes_upper: bool,
) -> Result<CouplingSet, CouplingError> {
    params.validate()?;
    let table = build_table(&params.manifold)?;
    let kappa_v = kappa_from_table(params, &table, CouplingKind::Vector, table.lines.len());
    let kappa_t = kappa_from_table(params, &table, CouplingKind::Tensor, table.lines.len());
    let noise = noise_params_with(params, noise_includes_upper)?;
    if !(0.0..1.0).contains(&noise.eps_a) {
        return Err(CouplingError::NoiseOutOfRange { name: "eps_a", value: noise.eps_a });
    }
    if !(0.0..1.0).contains(&noise.eps_p) {
        return Err(CouplingError::NoiseOutOfRange { name: "eps_p", value: noise.eps_p });
    }
    Ok(CouplingSet {
        kappa_v,
        kappa_t,
        eps_a: noise.eps_a,
        eps_p: noise.eps_p,
        eps_prime: noise.eps_prime,
        saturation: saturation(params)?,
    })
}

/// One row of a detuning sweep. `masked` marks rows within half a linewidth
/// of some excited level, where the dispersive model is meaningless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    /// Normalized detuning of the probe from the lowest level, Delta_0 / (Gamma/2).
    pub normalized_detuning: f64,
    pub kappa_v: f64,
    pub kappa_t: f64,
    pub eps_p: f64,
    pub eps_a: f64,
    pub masked: bool,
}

/// Evaluates the couplings over a uniform grid of normalized detunings,
/// endpoints included. Grid points landing exactly on a resonance are
/// omitted from the result; near-resonant rows are kept but masked. Rows
/// are computed concurrently and returned in grid order.
pub fn sweep_detuning(
    params: &ExperimentParams,
    start_norm: f64,
    stop_norm: f64,
    steps: usize,
) -> Result<Vec<SweepPoint>, CouplingError> {
    if steps < 2 || !(stop_norm > start_norm) {
        return Err(CouplingError::InvalidParams(format!(
            "sweep needs at least 2 steps over a widening range, got {steps} steps over [{start_norm}, {stop_norm}]"
        )));
    }
    if params.manifold.excited_levels.len() < 2 {
        return Err(CouplingError::SingleLevelManifold);
    }
    let table = build_table(&params.manifold)?;
    let gamma = params.manifold.gamma_mhz;
    let half_width = gamma / 2.0;
    let base = params.manifold.base_offset_mhz();
    let offsets: Vec<f64> =
        params.manifold.excited_levels.iter().map(|l| l.offset_mhz - base).collect();
    let points: Vec<Option<SweepPoint>> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let norm = start_norm
                + (stop_norm - start_norm) * (i as f64) / ((steps - 1) as f64);
            let delta = norm * half_width;
            if offsets.iter().any(|o| delta - o == 0.0) {
                return Ok(None);
            }
            let masked = offsets.iter().any(|o| (delta - o).abs() < half_width);
            let p = params.with_detuning(delta);
            let kappa_v = kappa_from_table(&p, &table, CouplingKind::Vector, table.lines.len());
            let kappa_t = kappa_from_table(&p, &table, CouplingKind::Tensor, table.lines.len());
            let noise = noise_params(&p)?;
            Ok(Some(SweepPoint {
                normalized_detuning: norm,
                kappa_v,
                kappa_t,
                eps_p: noise.eps_p,
                eps_a: noise.eps_a,
                masked,
            }))
        })
        .collect::<Result<_, CouplingError>>()?;
    Ok(points.into_iter().flatten().collect())
}

/// Finds a zero crossing of kappa_V or kappa_T inside [lo, hi] (MHz) by
/// bisection, to well below 1e-6 MHz.
pub fn find_zero(
    params: &ExperimentParams,
    kind: CouplingKind,
    lo_mhz: f64,
    hi_mhz: f64,
) -> Result<f64, CouplingError> {
    if !(hi_mhz > lo_mhz) {
        return Err(CouplingError::InvalidParams(format!(
            "bracket [{lo_mhz}, {hi_mhz}] is not an interval"
        )));
    }
    let table = build_table(&params.manifold)?;
    let eval = |d: f64| -> Result<f64, CouplingError> {
        let p = params.with_detuning(d);
        p.validate()?;
        Ok(kappa_from_table(&p, &table, kind, table.lines.len()))
    };
    let mut lo = lo_mhz;
    let mut hi = hi_mhz;
    let mut f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(CouplingError::NoSignChange { lo: lo_mhz, hi: hi_mhz });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-9 {
            return Ok(mid);
        }
        let f_mid = eval(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
