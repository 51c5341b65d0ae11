//! JSON run configuration for the command-line front end.
//!
//! A single config file names the spacetime and carries per-command
//! parameter blocks; each CLI subcommand reads only its own block. Unknown
//! keys are rejected everywhere.

use serde::{Deserialize, Serialize};

use crate::catalog::SpacetimeConfig;
use crate::error::{Error, Result};
use crate::point::Chart;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spacetime: SpacetimeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<JacobiConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<HorizonConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("run config: {e}")))
    }
}

/// Direction of a batch coordinate transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Original static chart -> Fermi coordinates.
    #[serde(rename = "to-fermi")]
    ToFermi,
    /// Fermi coordinates -> original static chart.
    #[serde(rename = "from-fermi")]
    FromFermi,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    pub direction: Direction,
    pub points: Vec<[f64; 4]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub chart: Chart,
    pub points: Vec<[f64; 4]>,
}

/// Radial grid for curvature tables. Endpoints are included, except that an
/// endpoint on the chart boundary is clamped inward by 1e-9 of the range.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub rho_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    #[serde(default = "default_count")]
    pub count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            rho_min: 0.0,
            rho_max: None,
            count: default_count(),
        }
    }
}

fn default_count() -> usize {
    33
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiConfig {
    #[serde(default = "default_delta_t")]
    pub delta_t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    #[serde(default = "default_count")]
    pub count: usize,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        Self {
            delta_t: default_delta_t(),
            rho_max: None,
            count: default_count(),
        }
    }
}

fn default_delta_t() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonConfig {
    #[serde(default = "default_horizon_tol")]
    pub tolerance: f64,
}

impl Default for HorizonConfig {
    fn default() -> Self {
        Self {
            tolerance: default_horizon_tol(),
        }
    }
}

fn default_horizon_tol() -> f64 {
    1e-12
}

/// Check tolerances a run may override.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Allowed disagreement between analytic and finite-difference
    /// curvature columns.
    #[serde(default = "default_curvature_tol")]
    pub curvature: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            curvature: default_curvature_tol(),
        }
    }
}

fn default_curvature_tol() -> f64 {
    1e-6
}
