//! Metrics JSON written next to every set of data files.

use std::collections::BTreeMap;

use orir_core::IntegratorConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const TOOL: &str = "orir";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Metric {
    Scalar(f64),
    List(Vec<f64>),
}

impl Metric {
    fn is_finite(&self) -> bool {
        match self {
            Metric::Scalar(x) => x.is_finite(),
            Metric::List(v) => v.iter().all(|x| x.is_finite()),
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Metric::Scalar(x) => Some(*x),
            Metric::List(_) => None,
        }
    }
}

impl From<f64> for Metric {
    fn from(x: f64) -> Self {
        Metric::Scalar(x)
    }
}

impl From<Vec<f64>> for Metric {
    fn from(v: Vec<f64>) -> Self {
        Metric::List(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorInfo {
    pub method: String,
    pub rtol: f64,
    pub atol: f64,
    pub sample_interval_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub integrator: IntegratorInfo,
}

impl Provenance {
    pub fn new(cfg: &IntegratorConfig) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            integrator: IntegratorInfo {
                method: "gragg-bulirsch-stoer".to_string(),
                rtol: cfg.rtol,
                atol: cfg.atol,
                sample_interval_us: cfg.sample_interval,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsReport {
    /// Name of the figure or scenario protocol.
    pub scenario: String,
    /// Echo of the inputs that produced the numbers.
    pub inputs: serde_json::Value,
    pub metrics: BTreeMap<String, Metric>,
    pub provenance: Provenance,
}

impl MetricsReport {
    pub fn new(scenario: impl Into<String>, inputs: serde_json::Value, cfg: &IntegratorConfig) -> Self {
        Self {
            scenario: scenario.into(),
            inputs,
            metrics: BTreeMap::new(),
            provenance: Provenance::new(cfg),
        }
    }

    pub fn insert(&mut self, name: &str, value: impl Into<Metric>) {
        self.metrics.insert(name.to_string(), value.into());
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).and_then(Metric::as_scalar)
    }

    pub fn validate(&self) -> Result<()> {
        if self.provenance.tool != TOOL {
            return Err(CliError::validation(format!("unexpected tool `{}`", self.provenance.tool)));
        }
        if let Some((name, _)) = self.metrics.iter().find(|(_, m)| !m.is_finite()) {
            return Err(CliError::Numerical(format!("metric `{name}` is not finite")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        serde_json::to_string_pretty(self).map_err(|e| CliError::Numerical(e.to_string()))
    }

    /// Parses and re-validates a metrics file.
    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: "metrics.json".into(),
            msg: e.to_string(),
        })?;
        report.validate()?;
        Ok(report)
    }
}
