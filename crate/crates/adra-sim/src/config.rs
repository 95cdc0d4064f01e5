//! Run configuration: every tunable of the pipeline in one strict TOML
//! file.
//!
//! Unknown keys are rejected (with the parser's line/column context), an
//! empty file yields the built-in defaults, and a dumped configuration
//! parses back to an identical value.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::array::{ArrayGeometry, BiasPlan};
use crate::device::DeviceParams;
use crate::energy::{CalibrationTargets, Scheme, TimingTargets};
use crate::error::{Error, Result};
use crate::sensing::{VoltageScheme, VoltageSenseParams};

/// Sense-path settings shared by the reference ladder and the
/// discharge-based schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SenseConfig {
    /// Safety margin (A) each gap between adjacent current levels must
    /// clear twice before the reference ladder is accepted.
    pub margin_amps: f64,
    /// Discharge threshold pitch (V) of the voltage schemes.
    pub delta_volts: f64,
    /// Bitline capacitance (F).
    pub bitline_capacitance: f64,
    /// Sense window (s). Omit to derive the window that lets the strongest
    /// level discharge the full six pitches.
    pub sense_time: Option<f64>,
}

impl Default for SenseConfig {
    fn default() -> Self {
        SenseConfig {
            margin_amps: 1.0e-6,
            delta_volts: 0.02,
            bitline_capacitance: 1.0e-12,
            sense_time: None,
        }
    }
}

/// What the command-line entry points run by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Sensing scheme functional runs use.
    pub scheme: Scheme,
    /// Fraction of columns doing useful work during an in-array op.
    pub parallelism: f64,
    /// Square array sizes a sweep evaluates.
    pub sweep_sizes: Vec<usize>,
    /// Schemes a sweep evaluates.
    pub sweep_schemes: Vec<Scheme>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scheme: Scheme::Current,
            parallelism: 1.0,
            sweep_sizes: vec![256, 512, 1024],
            sweep_schemes: Scheme::ALL.to_vec(),
        }
    }
}

/// Complete simulator configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub device: DeviceParams,
    pub bias: BiasPlan,
    pub geometry: ArrayGeometry,
    pub sensing: SenseConfig,
    pub energy: CalibrationTargets,
    pub timing: TimingTargets,
    pub run: RunConfig,
}

fn invariant(field: &str, error: Error) -> Error {
    Error::ConfigInvariant { field: field.to_string(), message: error.to_string() }
}

impl SimConfig {
    /// Parses and validates a TOML document; an empty document is the
    /// default configuration.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: SimConfig = toml::from_str(text)
            .map_err(|e| Error::ConfigParse { message: e.to_string() })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            message: format!("cannot read config {}: {e}", path.display()),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::ConfigParse { message: e.to_string() })
    }

    /// Cross-checks every section, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        self.device.validate().map_err(|e| invariant("device", e))?;
        self.bias.validate().map_err(|e| invariant("bias", e))?;
        self.geometry.validate().map_err(|e| invariant("geometry", e))?;
        self.energy.validate().map_err(|e| invariant("energy", e))?;
        self.timing.validate().map_err(|e| invariant("timing", e))?;

        if !(self.sensing.margin_amps > 0.0) {
            return Err(Error::ConfigInvariant {
                field: "sensing.margin_amps".into(),
                message: format!("must be positive, got {}", self.sensing.margin_amps),
            });
        }
        self.voltage_sense_params(VoltageScheme::Precharged)
            .validate(self.bias.v_read)
            .map_err(|e| invariant("sensing", e))?;
        if let Some(t) = self.sensing.sense_time {
            if !(t > 0.0) {
                return Err(Error::ConfigInvariant {
                    field: "sensing.sense_time".into(),
                    message: format!("must be positive when given, got {t}"),
                });
            }
        }

        if !(self.run.parallelism > 0.0 && self.run.parallelism <= 1.0) {
            return Err(Error::ConfigInvariant {
                field: "run.parallelism".into(),
                message: format!("must lie in (0, 1], got {}", self.run.parallelism),
            });
        }
        if self.run.sweep_sizes.is_empty() || self.run.sweep_schemes.is_empty() {
            return Err(Error::ConfigInvariant {
                field: "run.sweep_sizes".into(),
                message: "sweep needs at least one size and one scheme".into(),
            });
        }
        for &size in &self.run.sweep_sizes {
            if size < self.geometry.word_width {
                return Err(Error::ConfigInvariant {
                    field: "run.sweep_sizes".into(),
                    message: format!(
                        "size {size} cannot hold a {}-bit word",
                        self.geometry.word_width
                    ),
                });
            }
        }
        Ok(())
    }

    /// Voltage-path sense parameters under the given resting scheme.
    pub fn voltage_sense_params(&self, scheme: VoltageScheme) -> VoltageSenseParams {
        VoltageSenseParams {
            delta: self.sensing.delta_volts,
            cbl: self.sensing.bitline_capacitance,
            scheme,
        }
    }
}
