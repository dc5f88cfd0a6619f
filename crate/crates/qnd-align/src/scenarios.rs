//! Measurement geometries: the concrete channels for each probing scheme
//! and their conditional-squeezing figures of merit.
//!
//! Mode conventions. Atomic modes expose the alignment quadratures (x, p).
//! Light modes expose Stokes quadratures; for the tensorial geometries the
//! pair is (X, P) = (s_x, s_y), for the vectorial geometry it is
//! (s_y, s_z). The second ensemble of the double-cell geometries carries a
//! negative symplectic sign (opposite orientation).

use crate::couplings::CouplingSet;
use crate::gaussian::{
    check_symplectic_between, rotation_channel, EngineError, GaussianState, LinearChannel,
    ModeLabel,
    Quadrature,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("{0}")]
    InvalidConfig(String),
    #[error("noise parameter {name} = {value} outside [0, 1)")]
    NoiseOutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    VectorialSinglePass,
    TensorialSinglePass,
    MixedSinglePass,
    DoublePass,
    DoubleCell,
    DoubleCellTwoPulse,
}

impl Geometry {
    pub const ALL: [Geometry; 6] = [
        Geometry::VectorialSinglePass,
        Geometry::TensorialSinglePass,
        Geometry::MixedSinglePass,
        Geometry::DoublePass,
        Geometry::DoubleCell,
        Geometry::DoubleCellTwoPulse,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::VectorialSinglePass => "vectorial_single_pass",
            Geometry::TensorialSinglePass => "tensorial_single_pass",
            Geometry::MixedSinglePass => "mixed_single_pass",
            Geometry::DoublePass => "double_pass",
            Geometry::DoubleCell => "double_cell",
            Geometry::DoubleCellTwoPulse => "double_cell_two_pulse",
        }
    }

    /// Spontaneous-emission parameters are doubled in these geometries.
    pub fn doubles_noise(&self) -> bool {
        matches!(
            self,
            Geometry::DoublePass | Geometry::DoubleCell | Geometry::DoubleCellTwoPulse
        )
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Geometry::ALL
            .iter()
            .find(|g| g.name() == s)
            .copied()
            .ok_or_else(|| ScenarioError::InvalidConfig(format!("unknown geometry '{s}'")))
    }
}

/// x -> x + k s_z, p -> p, s_y -> s_y + k p, s_z -> s_z
/// on modes [atom(x, p), light(s_y, s_z)].
pub fn build_vectorial(kappa_v: f64) -> LinearChannel {
    let mut m = DMatrix::identity(4, 4);
    m[(0, 3)] = kappa_v;
    m[(2, 1)] = kappa_v;
    LinearChannel::from_matrix(m)
}

/// First-order single-pass alignment map on [atom(x, p), light(s_x, s_y)]:
/// x -> x + k s_y, p -> p - k s_x, s_x -> s_x + k p, s_y -> s_y - k x.
/// Not QND: its symplectic residual is 2 k^2.
pub fn build_tensorial_single(kappa_t: f64) -> LinearChannel {
    let mut m = DMatrix::identity(4, 4);
    m[(0, 3)] = kappa_t;
    m[(1, 2)] = -kappa_t;
    m[(2, 1)] = kappa_t;
    m[(3, 0)] = -kappa_t;
    LinearChannel::from_matrix(m)
}

/// Single pass with both couplings active, first order in each; the
/// vectorial part enters the atoms as a light shift weighted by
/// sqrt(2n/N) and the light as Faraday rotation weighted by sqrt(2N/n).
pub fn build_mixed_single(
    kappa_v: f64,
    kappa_t: f64,
    photons_n: f64,
    atoms_n: f64,
) -> Result<LinearChannel, ScenarioError> {
    if !(photons_n > 0.0) || !(atoms_n > 0.0) {
        return Err(ScenarioError::InvalidConfig(format!(
            "mixed map needs positive atom and photon numbers, got N = {atoms_n}, n = {photons_n}"
        )));
    }
    let shift = kappa_v * (2.0 * photons_n / atoms_n).sqrt();
    let faraday = kappa_v * (2.0 * atoms_n / photons_n).sqrt();
    let mut m = DMatrix::identity(4, 4);
    m[(0, 3)] = kappa_t;
    m[(0, 1)] = -shift;
    m[(1, 2)] = -kappa_t;
    m[(1, 0)] = shift;
    m[(2, 1)] = kappa_t;
    m[(2, 3)] = -faraday;
    m[(3, 0)] = -kappa_t;
    m[(3, 2)] = faraday;
    Ok(LinearChannel::from_matrix(m))
}

/// Net double-pass map on [atom(x, p), light(s_x, s_y)]:
/// x -> x, p -> -p + 2 k s_x, s_x -> s_x, s_y -> s_y - 2 k x.
/// x is exactly conserved (the QND variable); s_y records it.
pub fn build_double_pass(kappa_t: f64) -> LinearChannel {
    let mut m = DMatrix::identity(4, 4);
    m[(1, 1)] = -1.0;
    m[(1, 2)] = 2.0 * kappa_t;
    m[(3, 0)] = -2.0 * kappa_t;
    LinearChannel::from_matrix(m)
}

/// One pulse through two oppositely oriented cells, on modes
/// [atom_a(x, p), atom_b(x, p), light(s_x, s_y)] with atom_b sign-flipped.
///
/// The sums x_a + x_b and p_a + p_b are conserved to all orders while the
/// light integrates them:
///
///   s_x -> s_x + k (p_a + p_b),   s_y -> s_y - k (x_a + x_b).
///
/// The individual cells exchange fluctuations at second order; the k^2/2
/// redistribution terms below make the map exactly symplectic under the
/// signed form at every k, with the printed first-order behavior.
pub fn build_double_cell(kappa_t: f64) -> LinearChannel {
    let k = kappa_t;
    let q = k * k / 2.0;
    let mut m = DMatrix::identity(6, 6);
    m[(0, 0)] = 1.0 - q;
    m[(0, 2)] = -q;
    m[(0, 5)] = k;
    m[(1, 1)] = 1.0 - q;
    m[(1, 3)] = -q;
    m[(1, 4)] = -k;
    m[(2, 0)] = q;
    m[(2, 2)] = 1.0 + q;
    m[(2, 5)] = -k;
    m[(3, 1)] = q;
    m[(3, 3)] = 1.0 + q;
    m[(3, 4)] = k;
    m[(4, 1)] = k;
    m[(4, 3)] = k;
    m[(5, 0)] = -k;
    m[(5, 2)] = -k;
    LinearChannel::from_matrix(m)
}

/// Uncompensated light shifts in the double-cell geometry: the vectorial
/// back-action on each cell's atoms, first order in kappa_v. With the
/// compensation field on (the default) this term is exactly canceled.
fn double_cell_light_shift(kappa_v: f64, photons_n: f64, atoms_n: f64) -> LinearChannel {
    let shift = kappa_v * (2.0 * photons_n / atoms_n).sqrt();
    let mut m = DMatrix::identity(6, 6);
    for atom in [0usize, 1] {
        m[(2 * atom, 2 * atom + 1)] = -shift;
        m[(2 * atom + 1, 2 * atom)] = shift;
    }
    LinearChannel::from_matrix(m)
}

/// Spontaneous-emission dressing of a geometry channel: every atomic
/// quadrature keeps its self-coefficient damped by sqrt(1 - eps_a) plus an
/// injected vacuum of weight eps_a, light quadratures likewise with eps_p,
/// and the contamination terms couple each light mode into each atomic
/// mode with the printed 1/sqrt(2) asymmetry:
///
///   x gains (eps'/sqrt(2)) s_x,  p gains (eps'/sqrt(2)) s_y,
///   s_x gains eps' x,            s_y gains eps' p.
///
/// `doubled` doubles all three parameters (double-pass and double-cell).
pub fn add_noise(
    channel: &LinearChannel,
    atom_modes: &[usize],
    light_modes: &[usize],
    eps_a: f64,
    eps_p: f64,
    eps_prime: f64,
    doubled: bool,
) -> Result<LinearChannel, ScenarioError> {
    let factor = if doubled { 2.0 } else { 1.0 };
    let (ea, ep, eprime) = (eps_a * factor, eps_p * factor, eps_prime * factor);
    if !(0.0..1.0).contains(&ea) {
        return Err(ScenarioError::NoiseOutOfRange { name: "eps_a", value: ea });
    }
    if !(0.0..1.0).contains(&ep) {
        return Err(ScenarioError::NoiseOutOfRange { name: "eps_p", value: ep });
    }
    let mut out = channel.clone();
    for &a in atom_modes {
        for r in [2 * a, 2 * a + 1] {
            out.matrix[(r, r)] = channel.matrix[(r, r)] * (1.0 - ea).sqrt();
            out.noise[(r, r)] += ea;
        }
    }
    for &l in light_modes {
        for r in [2 * l, 2 * l + 1] {
            out.matrix[(r, r)] = channel.matrix[(r, r)] * (1.0 - ep).sqrt();
            out.noise[(r, r)] += ep;
        }
    }
    for &a in atom_modes {
        for &l in light_modes {
            out.matrix[(2 * a, 2 * l)] += eprime / 2f64.sqrt();
            out.matrix[(2 * a + 1, 2 * l + 1)] += eprime / 2f64.sqrt();
            out.matrix[(2 * l, 2 * a)] += eprime;
            out.matrix[(2 * l + 1, 2 * a + 1)] += eprime;
        }
    }
    Ok(out)
}

/// Rotation of the named atomic modes by the accumulated Larmor phase
/// (2 Omega t for alignment components).
pub fn rotate_frame(
    labels: &[ModeLabel],
    atom_modes: &[&str],
    phase: f64,
) -> Result<LinearChannel, ScenarioError> {
    Ok(rotation_channel(labels, atom_modes, phase)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub geometry: Geometry,
    pub coupling: CouplingSet,
    pub include_noise: bool,
    /// Accumulated Larmor phase 2*Omega*t of the atomic alignment, radians.
    pub larmor_phase: f64,
    /// Compensation field for the vectorial light shifts in the double-cell
    /// geometry; modeled as exact cancelation when set.
    pub light_shift_compensation: bool,
    /// n/N, needed by the mixed map and the uncompensated light shift.
    pub photon_atom_ratio: f64,
}

impl ScenarioConfig {
    pub fn new(geometry: Geometry, coupling: CouplingSet) -> Self {
        ScenarioConfig {
            geometry,
            coupling,
            include_noise: true,
            larmor_phase: 0.0,
            light_shift_compensation: true,
            photon_atom_ratio: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub geometry: Geometry,
    pub coupling: CouplingSet,
    /// State after the channel, before any conditioning.
    pub output_state: GaussianState,
    /// Conditional variances, keyed `target|measured`.
    pub conditional_variances: BTreeMap<String, f64>,
    /// 10 log10(V / reference); reference 1 for single quadratures, 2 for
    /// two-ensemble sums.
    pub squeezing_db: BTreeMap<String, f64>,
    /// The figure a headline quotes; first-order value where the geometry
    /// has one, engine value otherwise.
    pub headline_squeezing_db: Option<f64>,
    pub epr: Option<f64>,
    /// Symplectic residual of the coherent part of the map, measured against
    /// the geometry's output algebra (the double pass reverses the atomic
    /// momentum, so its output lands on the flipped form). Zero for exact
    /// maps, Theta(kappa_t^2) for first-order truncations.
    pub symplectic_residual: f64,
    /// Relative growth of the headline conditional variance caused by the
    /// noise model, present when noise was included.
    pub noise_degradation: Option<f64>,
    pub warnings: Vec<String>,
}

struct Build {
    labels: Vec<ModeLabel>,
    channel: LinearChannel,
    atom_modes: Vec<usize>,
    light_modes: Vec<usize>,
}

fn build_geometry(config: &ScenarioConfig) -> Result<Build, ScenarioError> {
    let c = &config.coupling;
    match config.geometry {
        Geometry::VectorialSinglePass => Ok(Build {
            labels: vec![ModeLabel::new("atom"), ModeLabel::new("light")],
            channel: build_vectorial(c.kappa_v),
            atom_modes: vec![0],
            light_modes: vec![1],
        }),
        Geometry::TensorialSinglePass => Ok(Build {
            labels: vec![ModeLabel::new("atom"), ModeLabel::new("light")],
            channel: build_tensorial_single(c.kappa_t),
            atom_modes: vec![0],
            light_modes: vec![1],
        }),
        Geometry::MixedSinglePass => Ok(Build {
            labels: vec![ModeLabel::new("atom"), ModeLabel::new("light")],
            channel: build_mixed_single(c.kappa_v, c.kappa_t, config.photon_atom_ratio, 1.0)?,
            atom_modes: vec![0],
            light_modes: vec![1],
        }),
        Geometry::DoublePass => Ok(Build {
            labels: vec![ModeLabel::new("atom"), ModeLabel::new("light")],
            channel: build_double_pass(c.kappa_t),
            atom_modes: vec![0],
            light_modes: vec![1],
        }),
        Geometry::DoubleCell => Ok(Build {
            labels: vec![
                ModeLabel::new("atom_a"),
                ModeLabel::flipped("atom_b"),
                ModeLabel::new("light"),
            ],
            channel: double_cell_channel(config)?,
            atom_modes: vec![0, 1],
            light_modes: vec![2],
        }),
        Geometry::DoubleCellTwoPulse => {
            let single = double_cell_channel(config)?;
            // embed pulse 1 on light, pulse 2 on light2
            let mut m1 = DMatrix::identity(8, 8);
            let mut m2 = DMatrix::identity(8, 8);
            for i in 0..6 {
                for j in 0..6 {
                    let (ei, ej) = (embed(i, 0), embed(j, 0));
                    m1[(ei, ej)] = single.matrix[(i, j)];
                    let (ei, ej) = (embed(i, 1), embed(j, 1));
                    m2[(ei, ej)] = single.matrix[(i, j)];
                }
            }
            let channel =
                LinearChannel::from_matrix(m1).then(&LinearChannel::from_matrix(m2))?;
            Ok(Build {
                labels: vec![
                    ModeLabel::new("atom_a"),
                    ModeLabel::flipped("atom_b"),
                    ModeLabel::new("light"),
                    ModeLabel::new("light2"),
                ],
                channel,
                atom_modes: vec![0, 1],
                light_modes: vec![2, 3],
            })
        }
    }
}

/// Index of single-cell quadrature `i` in the two-pulse layout where the
/// light of pulse `pulse` sits at mode 2 + pulse.
fn embed(i: usize, pulse: usize) -> usize {
    if i < 4 {
        i
    } else {
        i + 2 * pulse
    }
}

fn double_cell_channel(config: &ScenarioConfig) -> Result<LinearChannel, ScenarioError> {
    let c = &config.coupling;
    let base = build_double_cell(c.kappa_t);
    if config.light_shift_compensation || c.kappa_v == 0.0 {
        Ok(base)
    } else {
        double_cell_light_shift(c.kappa_v, config.photon_atom_ratio, 1.0).then(&base).map_err(Into::into)
    }
}

fn db(variance: f64, reference: f64) -> f64 {
    10.0 * (variance / reference).log10()
}

/// Runs a geometry end to end: builds the channel, dresses it with noise,
/// propagates vacuum through it and extracts the conditional moments.
pub fn evaluate(config: &ScenarioConfig) -> Result<ScenarioResult, ScenarioError> {
    let c = config.coupling;
    let mut warnings = Vec::new();
    if c.saturation > 1e-2 {
        warnings.push(format!(
            "saturation parameter {:.3e} above 1e-2: dispersive model unreliable",
            c.saturation
        ));
    }
    if config.larmor_phase != 0.0 && config.geometry == Geometry::DoublePass {
        return Err(ScenarioError::InvalidConfig(
            "rotating-frame operation is not available in the double-pass geometry \
             (the field would have to reverse between passes)"
                .into(),
        ));
    }
    let first_order = matches!(
        config.geometry,
        Geometry::TensorialSinglePass | Geometry::MixedSinglePass | Geometry::DoublePass
    );
    if first_order && c.kappa_t.abs() >= 0.5 {
        warnings.push(format!(
            "|kappa_t| = {:.3} outside the small-coupling domain of the first-order map",
            c.kappa_t.abs()
        ));
    }
    if config.geometry == Geometry::DoubleCell || config.geometry == Geometry::DoubleCellTwoPulse {
        if !config.light_shift_compensation && c.kappa_v != 0.0 {
            warnings.push(
                "light shifts uncompensated: first-order vectorial back-action added to the atoms"
                    .into(),
            );
        }
    }

    let built = build_geometry(config)?;
    let out_labels: Vec<ModeLabel> = if config.geometry == Geometry::DoublePass {
        built
            .labels
            .iter()
            .enumerate()
            .map(|(k, l)| {
                if built.atom_modes.contains(&k) {
                    ModeLabel { name: l.name.clone(), symplectic_sign: -l.symplectic_sign }
                } else {
                    l.clone()
                }
            })
            .collect()
    } else {
        built.labels.clone()
    };
    let symplectic_residual = check_symplectic_between(&built.channel, &built.labels, &out_labels)?;

    let mut channel = built.channel.clone();
    if config.include_noise {
        channel = add_noise(
            &channel,
            &built.atom_modes,
            &built.light_modes,
            c.eps_a,
            c.eps_p,
            c.eps_prime,
            config.geometry.doubles_noise(),
        )?;
    }
    if config.larmor_phase != 0.0 {
        let atoms: Vec<&str> = built
            .atom_modes
            .iter()
            .map(|&k| built.labels[k].name.as_str())
            .collect();
        let rot = rotate_frame(&built.labels, &atoms, config.larmor_phase)?;
        channel = rot.then(&channel)?;
    }

    let state = GaussianState::vacuum(built.labels.clone())?.apply_channel(&channel)?;

    let mut conditional_variances = BTreeMap::new();
    let mut squeezing_db = BTreeMap::new();
    let mut epr = None;
    let mut headline = None;

    match config.geometry {
        Geometry::VectorialSinglePass => {
            // light mode carries (s_y, s_z)
            let vx = state.conditional_variance("atom", Quadrature::X, "light", Quadrature::X)?;
            let vp = state.conditional_variance("atom", Quadrature::P, "light", Quadrature::X)?;
            conditional_variances.insert("x|sy".into(), vx);
            conditional_variances.insert("p|sy".into(), vp);
            squeezing_db.insert("x|sy".into(), db(vx, 1.0));
            squeezing_db.insert("p|sy".into(), db(vp, 1.0));
            headline = Some(db(vp, 1.0));
        }
        Geometry::TensorialSinglePass | Geometry::MixedSinglePass => {
            let vx = state.conditional_variance("atom", Quadrature::X, "light", Quadrature::P)?;
            let vp = state.conditional_variance("atom", Quadrature::P, "light", Quadrature::X)?;
            conditional_variances.insert("x|sy".into(), vx);
            conditional_variances.insert("p|sx".into(), vp);
            squeezing_db.insert("x|sy".into(), db(vx, 1.0));
            squeezing_db.insert("p|sx".into(), db(vp, 1.0));
            warnings.push(
                "single tensorial pass is not QND: conditioning yields no reduction".into(),
            );
        }
        Geometry::DoublePass => {
            let v_engine =
                state.conditional_variance("atom", Quadrature::X, "light", Quadrature::P)?;
            conditional_variances.insert("x|sy_engine".into(), v_engine);
            squeezing_db.insert("x|sy_engine".into(), db(v_engine, 1.0));
            let kt2 = 4.0 * c.kappa_t * c.kappa_t;
            if kt2 < 1.0 {
                let v_first = 1.0 - kt2;
                conditional_variances.insert("x|sy_first_order".into(), v_first);
                squeezing_db.insert("x|sy_first_order".into(), db(v_first, 1.0));
                headline = Some(db(v_first, 1.0));
            } else {
                warnings.push(format!(
                    "first-order variance 1 - 4 kappa_t^2 omitted (4 kappa_t^2 = {kt2:.3} >= 1)"
                ));
                headline = Some(db(v_engine, 1.0));
            }
        }
        Geometry::DoubleCell | Geometry::DoubleCellTwoPulse => {
            let xsum: [(&str, Quadrature, f64); 2] =
                [("atom_a", Quadrature::X, 1.0), ("atom_b", Quadrature::X, 1.0)];
            let psum: [(&str, Quadrature, f64); 2] =
                [("atom_a", Quadrature::P, 1.0), ("atom_b", Quadrature::P, 1.0)];
            let v_xsum = state.conditional_variance_of_combination(
                &xsum,
                &[("light", Quadrature::P, 1.0)],
            )?;
            conditional_variances.insert("xsum|sy".into(), v_xsum);
            squeezing_db.insert("xsum|sy".into(), db(v_xsum, 2.0));
            headline = Some(db(v_xsum, 2.0));
            let mut conditioned = state.condition_on_homodyne("light", Quadrature::P, 0.0)?;
            if config.geometry == Geometry::DoubleCellTwoPulse {
                let v_psum = conditioned.conditional_variance_of_combination(
                    &psum,
                    &[("light2", Quadrature::X, 1.0)],
                )?;
                conditional_variances.insert("psum|sx".into(), v_psum);
                squeezing_db.insert("psum|sx".into(), db(v_psum, 2.0));
                conditioned = conditioned.condition_on_homodyne("light2", Quadrature::X, 0.0)?;
            }
            epr = Some(conditioned.epr_variance("atom_a", "atom_b")?);
        }
    }

    let noise_degradation = if config.include_noise {
        let clean = ScenarioConfig { include_noise: false, ..config.clone() };
        let clean_result = evaluate(&clean)?;
        headline_variance(config.geometry, &conditional_variances)
            .zip(headline_variance(config.geometry, &clean_result.conditional_variances))
            .map(|(noisy, clean)| (noisy - clean) / clean)
    } else {
        None
    };

    Ok(ScenarioResult {
        geometry: config.geometry,
        coupling: c,
        output_state: state,
        conditional_variances,
        squeezing_db,
        headline_squeezing_db: headline,
        epr,
        symplectic_residual,
        noise_degradation,
        warnings,
    })
}

fn headline_variance(geometry: Geometry, cv: &BTreeMap<String, f64>) -> Option<f64> {
    let key = match geometry {
        Geometry::VectorialSinglePass => "p|sy",
        Geometry::DoublePass => "x|sy_engine",
        Geometry::DoubleCell | Geometry::DoubleCellTwoPulse => "xsum|sy",
        _ => return None,
    };
    cv.get(key).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{check_symplectic, symplectic_form};
    use approx::assert_abs_diff_eq;

    fn coupling(kappa_v: f64, kappa_t: f64) -> CouplingSet {
        CouplingSet {
            kappa_v,
            kappa_t,
            eps_a: 0.0,
            eps_p: 0.0,
            eps_prime: 0.0,
            saturation: 0.0,
        }
    }

    fn rb_coupling() -> CouplingSet {
        CouplingSet {
            kappa_v: 0.0,
            kappa_t: -0.42548,
            eps_a: 0.07065,
            eps_p: 0.07065,
            eps_prime: -1.995e-3,
            saturation: 4.46e-3,
        }
    }

    #[test]
    fn vectorial_minimal_state() {
        for k in [0.1, 1.0, 3.0] {
            let mut config =
                ScenarioConfig::new(Geometry::VectorialSinglePass, coupling(k, 0.0));
            config.include_noise = false;
            let r = evaluate(&config).unwrap();
            assert_abs_diff_eq!(
                r.conditional_variances["p|sy"],
                1.0 / (1.0 + k * k),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(r.conditional_variances["x|sy"], 1.0 + k * k, epsilon = 1e-12);
            assert!(r.symplectic_residual < 1e-12);
        }
    }

    #[test]
    fn tensorial_single_pass_is_not_qnd() {
        let mut config = ScenarioConfig::new(Geometry::TensorialSinglePass, coupling(0.0, 0.1));
        config.include_noise = false;
        let r = evaluate(&config).unwrap();
        // no first-order conditioning: cross-covariances vanish
        assert_abs_diff_eq!(r.conditional_variances["x|sy"], 1.01, epsilon = 1e-12);
        assert_abs_diff_eq!(r.conditional_variances["p|sx"], 1.01, epsilon = 1e-12);
        assert_abs_diff_eq!(r.symplectic_residual, 0.02, epsilon = 1e-14);
        assert!(r.warnings.iter().any(|w| w.contains("not QND")));
    }

    #[test]
    fn mixed_reduces_to_tensorial_at_zero_kappa_v() {
        let tensorial = build_tensorial_single(0.3);
        let mixed = build_mixed_single(0.0, 0.3, 2.0, 1.0).unwrap();
        assert_eq!(tensorial.matrix, mixed.matrix);
        assert!(build_mixed_single(0.1, 0.3, 0.0, 1.0).is_err());
    }

    #[test]
    fn double_pass_conserves_x_and_squeezes_it() {
        let ch = build_double_pass(0.35);
        for j in 0..4 {
            assert_eq!(ch.matrix[(0, j)], if j == 0 { 1.0 } else { 0.0 });
        }
        let mut config = ScenarioConfig::new(Geometry::DoublePass, coupling(0.0, 0.35));
        config.include_noise = false;
        let r = evaluate(&config).unwrap();
        let kt2 = 4.0 * 0.35f64 * 0.35;
        assert_abs_diff_eq!(
            r.conditional_variances["x|sy_engine"],
            1.0 / (1.0 + kt2),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(r.conditional_variances["x|sy_first_order"], 0.51, epsilon = 1e-12);
        assert_abs_diff_eq!(r.headline_squeezing_db.unwrap(), 10.0 * 0.51f64.log10(), epsilon = 1e-12);
        // momentum reversal lands exactly on the flipped atomic algebra
        assert!(r.symplectic_residual < 1e-12);
    }

    #[test]
    fn double_pass_first_order_value_omitted_when_meaningless() {
        let mut config = ScenarioConfig::new(Geometry::DoublePass, coupling(0.0, 0.8));
        config.include_noise = false;
        let r = evaluate(&config).unwrap();
        assert!(!r.conditional_variances.contains_key("x|sy_first_order"));
        assert!(r.warnings.iter().any(|w| w.contains("omitted")));
    }

    #[test]
    fn double_cell_formulas() {
        for k in [0.3, 1.0] {
            let mut config = ScenarioConfig::new(Geometry::DoubleCell, coupling(0.0, k));
            config.include_noise = false;
            let r = evaluate(&config).unwrap();
            assert_abs_diff_eq!(
                r.conditional_variances["xsum|sy"],
                2.0 / (1.0 + 2.0 * k * k),
                epsilon = 1e-10
            );
            assert!(r.symplectic_residual < 1e-12);

            let mut config2 = ScenarioConfig::new(Geometry::DoubleCellTwoPulse, coupling(0.0, k));
            config2.include_noise = false;
            let r2 = evaluate(&config2).unwrap();
            assert_abs_diff_eq!(r2.epr.unwrap(), 4.0 / (1.0 + 2.0 * k * k), epsilon = 1e-10);
        }
    }

    #[test]
    fn double_cell_no_coupling_means_no_entanglement() {
        let mut config = ScenarioConfig::new(Geometry::DoubleCell, coupling(0.0, 0.0));
        config.include_noise = false;
        let r = evaluate(&config).unwrap();
        assert_eq!(r.epr.unwrap(), 4.0);
    }

    #[test]
    fn double_cell_map_is_exactly_symplectic_at_large_coupling() {
        let labels = [
            ModeLabel::new("atom_a"),
            ModeLabel::flipped("atom_b"),
            ModeLabel::new("light"),
        ];
        let residual = check_symplectic(&build_double_cell(2.0), &labels).unwrap();
        assert!(residual < 1e-12, "residual {residual}");
        // without the sign flip the pairing is broken
        let unsigned = [
            ModeLabel::new("atom_a"),
            ModeLabel::new("atom_b"),
            ModeLabel::new("light"),
        ];
        assert!(check_symplectic(&build_double_cell(2.0), &unsigned).unwrap() > 1.0);
    }

    #[test]
    fn larmor_rotation_leaves_double_cell_conditioning_invariant() {
        let kappa = 0.5;
        let mut base = ScenarioConfig::new(Geometry::DoubleCell, coupling(0.0, kappa));
        base.include_noise = false;
        let reference = evaluate(&base).unwrap().conditional_variances["xsum|sy"];
        for theta in [0.7, 1.9, -2.4] {
            let config = ScenarioConfig { larmor_phase: theta, ..base.clone() };
            let r = evaluate(&config).unwrap();
            assert_abs_diff_eq!(
                r.conditional_variances["xsum|sy"],
                reference,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn larmor_rotation_refused_for_double_pass() {
        let mut config = ScenarioConfig::new(Geometry::DoublePass, coupling(0.0, 0.3));
        config.larmor_phase = 0.3;
        assert!(matches!(evaluate(&config), Err(ScenarioError::InvalidConfig(_))));
    }

    #[test]
    fn noise_preserves_vacuum_and_doubles() {
        let idle = LinearChannel::identity(2);
        let noisy = add_noise(&idle, &[], &[1], 0.0, 0.3, 0.0, false).unwrap();
        let vac = GaussianState::vacuum(vec![ModeLabel::new("atom"), ModeLabel::new("light")])
            .unwrap();
        let out = vac.apply_channel(&noisy).unwrap();
        let residual =
            (&out.cov - DMatrix::<f64>::identity(4, 4)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(residual < 1e-14);

        let unchanged = add_noise(&idle, &[0], &[1], 0.0, 0.0, 0.0, false).unwrap();
        assert_eq!(unchanged.matrix, idle.matrix);
        assert_eq!(unchanged.noise, idle.noise);

        assert!(matches!(
            add_noise(&idle, &[0], &[1], 0.6, 0.0, 0.0, true),
            Err(ScenarioError::NoiseOutOfRange { name: "eps_a", .. })
        ));
    }

    #[test]
    fn noise_matrix_structure_matches_the_printed_map() {
        let ch = add_noise(&LinearChannel::identity(2), &[0], &[1], 0.19, 0.11, -0.002, false)
            .unwrap();
        assert_abs_diff_eq!(ch.matrix[(0, 0)], (1.0f64 - 0.19).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(ch.matrix[(2, 2)], (1.0f64 - 0.11).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(ch.matrix[(0, 2)], -0.002 / 2f64.sqrt(), epsilon = 1e-18);
        assert_abs_diff_eq!(ch.matrix[(1, 3)], -0.002 / 2f64.sqrt(), epsilon = 1e-18);
        assert_abs_diff_eq!(ch.matrix[(2, 0)], -0.002, epsilon = 1e-18);
        assert_abs_diff_eq!(ch.matrix[(3, 1)], -0.002, epsilon = 1e-18);
        assert_eq!(ch.noise[(0, 0)], 0.19);
        assert_eq!(ch.noise[(2, 2)], 0.11);
    }

    #[test]
    fn rb87_noise_degrades_double_pass_mildly() {
        let config = ScenarioConfig::new(Geometry::DoublePass, rb_coupling());
        let r = evaluate(&config).unwrap();
        let degradation = r.noise_degradation.unwrap();
        assert!(degradation > 0.0 && degradation < 0.15, "degradation {degradation}");
        assert_abs_diff_eq!(degradation, 0.1019, epsilon = 2e-3);
    }

    #[test]
    fn geometry_names_round_trip() {
        for g in Geometry::ALL {
            assert_eq!(g.name().parse::<Geometry>().unwrap(), g);
        }
        assert!("sideways".parse::<Geometry>().is_err());
    }

    #[test]
    fn uncompensated_light_shift_changes_the_double_cell() {
        let mut c = coupling(0.2, 0.5);
        c.kappa_v = 0.2;
        let mut on = ScenarioConfig::new(Geometry::DoubleCell, c);
        on.include_noise = false;
        let mut off = on.clone();
        off.light_shift_compensation = false;
        let r_on = evaluate(&on).unwrap();
        let r_off = evaluate(&off).unwrap();
        assert!(r_off.warnings.iter().any(|w| w.contains("uncompensated")));
        assert!(
            (r_on.conditional_variances["xsum|sy"] - r_off.conditional_variances["xsum|sy"]).abs()
                > 1e-6
        );
    }

    #[test]
    fn signed_form_makes_the_sums_commute() {
        // the signed pairing of (x_a + x_b) with (p_a + p_b) vanishes
        let labels =
            [ModeLabel::new("atom_a"), ModeLabel::flipped("atom_b"), ModeLabel::new("light")];
        let omega = symplectic_form(&labels);
        let mut xsum = nalgebra::DVector::zeros(6);
        xsum[0] = 1.0;
        xsum[2] = 1.0;
        let mut psum = nalgebra::DVector::zeros(6);
        psum[1] = 1.0;
        psum[3] = 1.0;
        let pairing = (xsum.transpose() * &omega * &psum)[(0, 0)];
        assert_eq!(pairing, 0.0);
    }
}
