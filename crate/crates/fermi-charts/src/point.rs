use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate charts used throughout the crate.
///
/// Time is always the first coordinate. `CartesianStatic` is the chart the
/// metric family is originally written in; the two Fermi charts are built
/// along the central worldline; `StaticSpherical` is the diagonal
/// (t, r, theta, phi) form used for independent cross-checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    CartesianStatic,
    FermiCartesian,
    FermiPolar,
    StaticSpherical,
}

/// An event tagged with the chart its coordinates live in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimePoint {
    pub chart: Chart,
    /// Coordinates, time first.
    pub coords: [f64; 4],
}

impl SpacetimePoint {
    pub fn new(chart: Chart, coords: [f64; 4]) -> Self {
        Self { chart, coords }
    }

    pub fn cartesian_static(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self::new(Chart::CartesianStatic, [t, x, y, z])
    }

    pub fn fermi_cartesian(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self::new(Chart::FermiCartesian, [t, x1, x2, x3])
    }

    pub fn fermi_polar(t: f64, rho: f64, theta: f64, phi: f64) -> Self {
        Self::new(Chart::FermiPolar, [t, rho, theta, phi])
    }

    pub fn static_spherical(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        Self::new(Chart::StaticSpherical, [t, r, theta, phi])
    }

    pub fn time(&self) -> f64 {
        self.coords[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.coords[1], self.coords[2], self.coords[3]]
    }

    /// Euclidean norm of the spatial part. Only meaningful for the two
    /// Cartesian charts; polar charts carry the radius in `coords[1]`.
    /// Overflow-safe: finite coordinates give a finite norm.
    pub fn spatial_norm(&self) -> f64 {
        let [x, y, z] = self.spatial();
        x.hypot(y).hypot(z)
    }

    pub(crate) fn expect_chart(&self, expected: Chart) -> Result<()> {
        if self.chart == expected {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected,
                found: self.chart,
            })
        }
    }
}

/// Validates angular ranges for polar-type charts: 0 <= theta <= pi and
/// 0 <= phi < 2*pi, with the axis itself rejected as degenerate.
pub(crate) fn check_angles(theta: f64, phi: f64) -> Result<()> {
    use std::f64::consts::PI;
    if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::OutsideChart(format!(
            "angles (theta, phi) = ({theta}, {phi}) outside [0, pi] x [0, 2pi)"
        )));
    }
    if theta == 0.0 || theta == PI {
        return Err(Error::AxisDegeneracy);
    }
    Ok(())
}
