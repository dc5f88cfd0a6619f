//! Run configuration: a TOML document with engineering units (MHz, mm²,
//! µs, nm) converted to internal SI on the way into the physics layers.
//! Every field has a default so a config file only states overrides; the
//! defaults are the rubidium D2 reference setup used throughout the docs.

use crate::couplings::ExperimentParams;
use crate::half::HalfInt;
use crate::polarizability::{ExcitedLevel, TransitionManifold};
use crate::scenarios::Geometry;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unsupported schema_version {found} (this build reads {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("bad --set override '{0}': expected key.path=value")]
    BadOverride(String),
    #[error("--set path '{0}' does not exist in the config")]
    UnknownOverridePath(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub manifold: ManifoldConfig,
    pub experiment: ExperimentConfig,
    pub scenario: ScenarioSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifoldConfig {
    pub ground_f: HalfInt,
    pub j_ground: HalfInt,
    pub j_excited: HalfInt,
    pub nuclear_i: HalfInt,
    pub wavelength_nm: f64,
    pub gamma_mhz: f64,
    pub excited_levels: Vec<ExcitedLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub atoms: f64,
    pub photons: f64,
    pub beam_area_mm2: f64,
    pub pulse_duration_us: f64,
    /// Signed detuning of the probe from the lowest excited level, MHz.
    pub detuning_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub geometry: Geometry,
    pub include_noise: bool,
    /// Fold the highest excited level into the noise coupling too.
    pub noise_includes_upper: bool,
    pub larmor_phase: f64,
    pub light_shift_compensation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Detuning range in units of Gamma/2.
    pub start_norm: f64,
    pub stop_norm: f64,
    pub steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            manifold: ManifoldConfig::default(),
            experiment: ExperimentConfig::default(),
            scenario: ScenarioSection::default(),
            sweep: SweepSection::default(),
        }
    }
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        ManifoldConfig {
            ground_f: HalfInt::from_int(1),
            j_ground: HalfInt::from_twice(1),
            j_excited: HalfInt::from_twice(3),
            nuclear_i: HalfInt::from_twice(3),
            wavelength_nm: 780.24,
            gamma_mhz: 5.76,
            excited_levels: vec![
                ExcitedLevel { f: HalfInt::from_int(0), offset_mhz: 0.0 },
                ExcitedLevel { f: HalfInt::from_int(1), offset_mhz: 72.0 },
                ExcitedLevel { f: HalfInt::from_int(2), offset_mhz: 157.0 },
            ],
        }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            atoms: 0.5e8,
            photons: 0.5e8,
            beam_area_mm2: 1.0,
            pulse_duration_us: 0.5,
            detuning_mhz: 38.0,
        }
    }
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection {
            geometry: Geometry::DoublePass,
            include_noise: true,
            noise_includes_upper: false,
            larmor_phase: 0.0,
            light_shift_compensation: true,
        }
    }
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { start_norm: 5.0, stop_norm: 100.0, steps: 500 }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion {
                found: config.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        RunConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn manifold(&self) -> Result<TransitionManifold, ConfigError> {
        let m = &self.manifold;
        TransitionManifold::new(
            m.ground_f,
            m.j_ground,
            m.j_excited,
            m.nuclear_i,
            m.wavelength_nm * 1e-9,
            m.gamma_mhz,
            m.excited_levels.clone(),
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn experiment_params(&self) -> Result<ExperimentParams, ConfigError> {
        let params = ExperimentParams {
            atoms_n: self.experiment.atoms,
            photons_n: self.experiment.photons,
            beam_area_m2: self.experiment.beam_area_mm2 * 1e-6,
            pulse_duration_s: self.experiment.pulse_duration_us * 1e-6,
            probe_detuning_mhz: self.experiment.detuning_mhz,
            manifold: self.manifold()?,
        };
        params.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(params)
    }

    /// Full schema and physics validation; the `validate` command.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.experiment_params()?;
        if self.sweep.steps < 2 {
            return Err(ConfigError::Invalid(format!(
                "sweep.steps must be at least 2, got {}",
                self.sweep.steps
            )));
        }
        if !(self.sweep.stop_norm > self.sweep.start_norm) {
            return Err(ConfigError::Invalid(format!(
                "sweep range [{}, {}] has no width",
                self.sweep.start_norm, self.sweep.stop_norm
            )));
        }
        if !self.scenario.larmor_phase.is_finite() {
            return Err(ConfigError::Invalid("larmor_phase must be finite".into()));
        }
        Ok(())
    }

    /// Applies dotted-path `--set key=value` overrides, e.g.
    /// `experiment.detuning_mhz=50` or
    /// `manifold.excited_levels.2.offset_mhz=229.2`.
    pub fn with_overrides(&self, sets: &[String]) -> Result<RunConfig, ConfigError> {
        if sets.is_empty() {
            return Ok(self.clone());
        }
        let mut value =
            toml::Value::try_from(self).map_err(|e| ConfigError::Parse(e.to_string()))?;
        for s in sets {
            let (path, raw) =
                s.split_once('=').ok_or_else(|| ConfigError::BadOverride(s.clone()))?;
            let parsed = parse_scalar(raw);
            set_path(&mut value, path, parsed)?;
        }
        let config: RunConfig =
            value.try_into().map_err(|e| ConfigError::Parse(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion {
                found: config.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        Ok(config)
    }
}

/// Interprets an override value: TOML scalar syntax if it parses, bare
/// string otherwise (so geometry=double_cell needs no quotes).
fn parse_scalar(raw: &str) -> toml::Value {
    if let Ok(table) = format!("v = {raw}").parse::<toml::Table>() {
        if let Some(v) = table.get("v") {
            if !v.is_table() {
                return v.clone();
            }
        }
    }
    toml::Value::String(raw.to_string())
}

fn set_path(root: &mut toml::Value, path: &str, new: toml::Value) -> Result<(), ConfigError> {
    let segments: Vec<&str> = path.split('.').collect();
    if segments.is_empty() || segments.iter().any(|s| s.is_empty()) {
        return Err(ConfigError::BadOverride(path.to_string()));
    }
    let mut cursor = root;
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        if let Ok(index) = seg.parse::<usize>() {
            let arr = cursor
                .as_array_mut()
                .ok_or_else(|| ConfigError::UnknownOverridePath(path.to_string()))?;
            if index >= arr.len() {
                return Err(ConfigError::UnknownOverridePath(path.to_string()));
            }
            if last {
                arr[index] = new;
                return Ok(());
            }
            cursor = &mut arr[index];
        } else {
            let table = cursor
                .as_table_mut()
                .ok_or_else(|| ConfigError::UnknownOverridePath(path.to_string()))?;
            if !table.contains_key(*seg) {
                return Err(ConfigError::UnknownOverridePath(path.to_string()));
            }
            if last {
                table.insert(seg.to_string(), new);
                return Ok(());
            }
            cursor = table.get_mut(*seg).unwrap();
        }
    }
    unreachable!("loop returns on the last segment")
}
