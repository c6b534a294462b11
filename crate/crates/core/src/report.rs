//! Verification reports, run configuration and curve tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::convexbody::RadiusGrid;
use crate::error::{Error, Result};
use crate::matrange::SearchGrid;
use crate::numkernel::ToleranceConfig;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    BoundaryUncertain,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::BoundaryUncertain => "boundary-uncertain",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSettings {
    /// Directions on the unit circle for planar support/halfspace tests.
    pub circle_directions: usize,
    pub radius: RadiusGrid,
    pub search: SearchGrid,
    /// Random vector states used to verify paraboloid certificates.
    pub state_samples: usize,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            circle_directions: 720,
            radius: RadiusGrid::default(),
            search: SearchGrid::default(),
            state_samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<String>,
    /// Directory receiving CSV curve tables.
    pub curves_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: ToleranceConfig,
    pub grids: GridSettings,
    /// Perturbation size handed to the dilation algorithm.
    pub dilation_delta: f64,
    pub output: OutputPaths,
    /// Record per-check wall time. Off by default so reports stay byte-identical.
    pub record_wall_time: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            tolerances: ToleranceConfig::default(),
            grids: GridSettings::default(),
            dilation_delta: 1e-3,
            output: OutputPaths::default(),
            record_wall_time: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.grids.circle_directions < 8 {
            return Err(Error::InvalidArgument("circle_directions must be at least 8".into()));
        }
        if self.grids.state_samples == 0 {
            return Err(Error::InvalidArgument("state_samples must be positive".into()));
        }
        if !(self.dilation_delta > 0.0 && self.dilation_delta <= 0.1) {
            return Err(Error::InvalidArgument(format!(
                "dilation_delta = {} outside (0, 0.1]",
                self.dilation_delta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Identifier of the claim this check reproduces.
    pub anchor: String,
    /// SHA-256 of the canonical JSON of the check inputs.
    pub inputs_digest: String,
    pub status: Status,
    pub evidence: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(config: RunConfig, checks: Vec<Check>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            config,
            checks,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_failed())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(format!("report serialization: {e}")))
    }
}

/// Hex SHA-256 of the compact JSON encoding of `inputs`.
pub fn digest<T: Serialize + ?Sized>(inputs: &T) -> String {
    let bytes = serde_json::to_vec(inputs).expect("inputs serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// Column table destined for CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Curve {
    pub fn new(name: impl Into<String>, columns: &[&str], rows: Vec<Vec<f64>>) -> Result<Self> {
        let name = name.into();
        if rows.is_empty() {
            return Err(Error::InvalidArgument(format!("curve {name} has no rows")));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != columns.len()) {
            return Err(Error::Dimension(format!(
                "curve {name}: row {bad} has {} values for {} columns",
                rows[bad].len(),
                columns.len()
            )));
        }
        Ok(Self {
            name,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows,
        })
    }

    /// Rows formatted with shortest round-trip precision.
    pub fn formatted_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|v| format!("{v:?}")).collect())
            .collect()
    }
}
