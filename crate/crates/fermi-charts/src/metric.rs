use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Metric tensor value at a single event, signature (-, +, +, +).
///
/// Stored as a dense symmetric 4x4 matrix; index order is (t, x, y, z) or the
/// corresponding chart order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric4(Matrix4<f64>);

impl Metric4 {
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Self(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        Self(Matrix4::from_diagonal(&nalgebra::Vector4::from(d)))
    }

    pub fn zeros() -> Self {
        Self(Matrix4::zeros())
    }

    pub fn minkowski() -> Self {
        Self::diagonal([-1.0, 1.0, 1.0, 1.0])
    }

    pub fn component(&self, mu: usize, nu: usize) -> f64 {
        self.0[(mu, nu)]
    }

    pub fn as_matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Inverse metric, rejecting matrices that are singular or so
    /// ill-conditioned that the inverse fails a residual check.
    pub fn inverse(&self) -> Result<Matrix4<f64>> {
        let inv = self.0.try_inverse().ok_or(Error::SingularMetric)?;
        let residual = (self.0 * inv - Matrix4::identity()).abs().max();
        if residual > 1e-6 {
            return Err(Error::SingularMetric);
        }
        Ok(inv)
    }

    /// g(v, v) for a coordinate 4-vector.
    pub fn norm_of(&self, v: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                s += self.0[(mu, nu)] * v[mu] * v[nu];
            }
        }
        s
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.0 - self.0.transpose()).abs().max()
    }

    /// Largest componentwise difference to another metric value.
    pub fn max_abs_diff(&self, other: &Metric4) -> f64 {
        (self.0 - other.0).abs().max()
    }

    /// True when the eigenvalues split one negative / three positive.
    pub fn has_lorentzian_signature(&self) -> bool {
        let sym = (self.0 + self.0.transpose()) * 0.5;
        let eigen = nalgebra::SymmetricEigen::new(sym);
        let negatives = eigen.eigenvalues.iter().filter(|&&e| e < 0.0).count();
        let positives = eigen.eigenvalues.iter().filter(|&&e| e > 0.0).count();
        negatives == 1 && positives == 3
    }
}

impl std::ops::Index<(usize, usize)> for Metric4 {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}
