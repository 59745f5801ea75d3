//! Run configuration: an optional `key = value` file overridden by flags.

use std::path::{Path, PathBuf};

use iswhm_core::evolve::{EvolutionParams, Schedule};
use iswhm_core::operators::DEFAULT_MAX_DIM;
use iswhm_core::poly::parse;
use iswhm_core::{DecisionThresholds, HiForm, Polynomial};
use serde::Deserialize;

use crate::CliError;

/// Contents of a config file. Every key is optional.
///
/// ```toml
/// equation = "x - 16"
/// P = 6
/// T = 2000
/// dt = 1
/// hi_form = "complement_projector"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub equation: Option<String>,
    #[serde(rename = "P")]
    pub levels: Option<usize>,
    #[serde(rename = "T")]
    pub total_time: Option<f64>,
    pub dt: Option<f64>,
    pub hi_form: Option<String>,
    pub schedule: Option<String>,
    pub e0_stride: Option<usize>,
    pub record_stride: Option<usize>,
    pub max_dim: Option<usize>,
    pub dominance: Option<f64>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
    pub dump_operators: Option<PathBuf>,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Keys set in `over` replace those in `self`.
    pub fn merged(self, over: FileConfig) -> FileConfig {
        FileConfig {
            equation: over.equation.or(self.equation),
            levels: over.levels.or(self.levels),
            total_time: over.total_time.or(self.total_time),
            dt: over.dt.or(self.dt),
            hi_form: over.hi_form.or(self.hi_form),
            schedule: over.schedule.or(self.schedule),
            e0_stride: over.e0_stride.or(self.e0_stride),
            record_stride: over.record_stride.or(self.record_stride),
            max_dim: over.max_dim.or(self.max_dim),
            dominance: over.dominance.or(self.dominance),
            out: over.out.or(self.out),
            svg: over.svg.or(self.svg),
            dump_operators: over.dump_operators.or(self.dump_operators),
        }
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub equation: String,
    pub polynomial: Polynomial,
    pub levels: usize,
    pub params: EvolutionParams,
    pub max_dim: usize,
    pub thresholds: DecisionThresholds,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub dump_operators: Option<PathBuf>,
}

pub fn schedule_from_name(name: &str) -> Option<Schedule> {
    match name {
        "start" => Some(Schedule::Start),
        "midpoint" => Some(Schedule::Midpoint),
        _ => None,
    }
}

impl RunConfig {
    pub fn from_file_config(c: FileConfig) -> Result<Self, CliError> {
        let equation = c.equation.ok_or(CliError::Missing("equation"))?;
        let polynomial = parse(&equation).map_err(iswhm_core::Error::from)?;
        let levels = c.levels.ok_or(CliError::Missing("P"))?;
        if levels == 0 {
            return Err(CliError::Config("P must be at least 1".into()));
        }
        let total_time = c.total_time.ok_or(CliError::Missing("T"))?;
        let dt = c.dt.unwrap_or(1.0);
        let mut params = EvolutionParams::new(total_time, dt).map_err(iswhm_core::Error::from)?;
        if let Some(name) = c.hi_form {
            params.hi_form = HiForm::from_name(&name).ok_or_else(|| {
                CliError::Config(format!("unknown hi_form `{name}` (complement_projector, ones, laplacian)"))
            })?;
        }
        if let Some(name) = c.schedule {
            params.schedule = schedule_from_name(&name)
                .ok_or_else(|| CliError::Config(format!("unknown schedule `{name}` (start, midpoint)")))?;
        }
        for (key, stride) in [("e0_stride", c.e0_stride), ("record_stride", c.record_stride)] {
            if stride == Some(0) {
                return Err(CliError::Config(format!("{key} must be at least 1")));
            }
        }
        if let Some(s) = c.e0_stride {
            params.e0_stride = s;
        }
        if let Some(s) = c.record_stride {
            params.record_stride = s;
        }
        let max_dim = c.max_dim.unwrap_or(DEFAULT_MAX_DIM);
        if max_dim == 0 {
            return Err(CliError::Config("max_dim must be at least 1".into()));
        }
        let mut thresholds = DecisionThresholds::default();
        if let Some(d) = c.dominance {
            if !(d > 0.0 && d <= 1.0) {
                return Err(CliError::Config("dominance must lie in (0, 1]".into()));
            }
            thresholds.dominance = d;
        }
        let svg = c.svg.unwrap_or(false);
        if svg && c.out.is_none() {
            return Err(CliError::Config("svg output needs an output path".into()));
        }
        Ok(RunConfig {
            equation,
            polynomial,
            levels,
            params,
            max_dim,
            thresholds,
            out: c.out,
            svg,
            dump_operators: c.dump_operators,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> FileConfig {
        FileConfig::from_toml("equation = \"x - 16\"\nP = 6\nT = 2000\n").unwrap()
    }

    #[test]
    fn defaults() {
        let c = RunConfig::from_file_config(base()).unwrap();
        assert_eq!(c.params.dt, 1.0);
        assert_eq!(c.params.steps(), 2000);
        assert_eq!(c.params.hi_form, HiForm::ComplementProjector);
        assert_eq!(c.max_dim, DEFAULT_MAX_DIM);
        assert!(!c.svg);
    }

    #[test]
    fn flags_override_file() {
        let over = FileConfig { levels: Some(3), hi_form: Some("laplacian".into()), ..Default::default() };
        let c = RunConfig::from_file_config(base().merged(over)).unwrap();
        assert_eq!(c.levels, 3);
        assert_eq!(c.params.hi_form, HiForm::Laplacian);
        assert_eq!(c.params.total_time, 2000.0);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            FileConfig { levels: Some(0), ..base() },
            FileConfig { dt: Some(-1.0), ..base() },
            FileConfig { total_time: Some(10.5), ..base() },
            FileConfig { hi_form: Some("identity".into()), ..base() },
            FileConfig { e0_stride: Some(0), ..base() },
            FileConfig { equation: Some("x +".into()), ..base() },
            FileConfig { dominance: Some(1.5), ..base() },
            FileConfig { equation: None, ..base() },
            FileConfig { svg: Some(true), ..base() },
        ];
        for c in bad {
            assert!(RunConfig::from_file_config(c.clone()).is_err(), "{c:?}");
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(FileConfig::from_toml("equations = \"x\"").is_err());
    }
}
