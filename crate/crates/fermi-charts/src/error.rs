use thiserror::Error;

use crate::point::Chart;

/// Errors produced by chart transformations, metric evaluation, and the
/// geodesic integrator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("outside chart domain: {0}")]
    OutsideChart(String),

    #[error("expected a point in the {expected:?} chart, got {found:?}")]
    ChartMismatch { expected: Chart, found: Chart },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("metric is singular or too ill-conditioned to invert")]
    SingularMetric,

    #[error("polar point degenerate on the axis (theta = 0 or pi)")]
    AxisDegeneracy,

    #[error("step size underflow at s = {s}: chart boundary or horizon reached")]
    StepSizeUnderflow { s: f64 },

    #[error("integration exceeded {0} steps")]
    MaxStepsExceeded(usize),

    #[error("metric field does not provide exact derivatives")]
    NoExactDerivatives,

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
