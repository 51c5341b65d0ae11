//! Closed-form transformations between Fermi coordinates and the original
//! chart, and the exact Fermi metrics in Cartesian and polar form.
//!
//! All formulas are driven by the radial profile `sin(rho a)/(rho a)` (for
//! `k > 0`), `sinh(rho a)/(rho a)` (for `k < 0`), or 1 (flat), together with
//! its inverse-function counterpart built from `asin`/`asinh`. Removable
//! singularities at the origin are handled by short Taylor series.

use std::f64::consts::PI;

use nalgebra::Matrix4;

use crate::catalog::MetricSpec;
use crate::error::{Error, Result};
use crate::metric::Metric4;
use crate::point::{check_angles, Chart, SpacetimePoint};

/// Below this value of `|rho| * a` the direct quotients lose precision to
/// cancellation and the series forms take over.
const PROFILE_SERIES_THRESHOLD: f64 = 1e-4;

/// Wider window for the quotients that divide out rho^2 twice.
const RATIO_SERIES_THRESHOLD: f64 = 1e-2;

/// `sin(rho a)/(rho a)` for `k > 0`, `sinh(rho a)/(rho a)` for `k < 0`, and
/// 1 for `k = 0`; continuous at `rho = 0` with value 1.
///
/// Both branches share the series `sum_n (-k rho^2)^n / (2n+1)!`, which is
/// used verbatim (5 terms) near the origin.
pub fn scaled_profile(k: f64, rho: f64) -> f64 {
    let x = rho * k.abs().sqrt();
    if x < PROFILE_SERIES_THRESHOLD {
        let u = k * rho * rho;
        return 1.0 + u * (-1.0 / 6.0 + u * (1.0 / 120.0 + u * (-1.0 / 5040.0 + u / 362880.0)));
    }
    if k > 0.0 {
        x.sin() / x
    } else {
        x.sinh() / x
    }
}

/// `asin(r a)/(r a)`, `asinh(r a)/(r a)`, or 1, by the sign of `k`. Shared
/// series: `sum_n c_n (k r^2)^n` with `c_n = (2n)! / (4^n (n!)^2 (2n+1))`.
pub fn inverse_profile(k: f64, r: f64) -> f64 {
    let y = r * k.abs().sqrt();
    if y < PROFILE_SERIES_THRESHOLD {
        let u = k * r * r;
        return 1.0 + u * (1.0 / 6.0 + u * (3.0 / 40.0 + u * (15.0 / 336.0 + u * 105.0 / 3456.0)));
    }
    if k > 0.0 {
        y.asin() / y
    } else {
        y.asinh() / y
    }
}

/// `cos(rho a)` / `cosh(rho a)` / 1, the derivative companion of
/// [`scaled_profile`].
pub(crate) fn profile_cos(k: f64, rho: f64) -> f64 {
    let x = rho * k.abs().sqrt();
    if k > 0.0 {
        x.cos()
    } else if k < 0.0 {
        x.cosh()
    } else {
        1.0
    }
}

/// `(profile_cos - scaled_profile)/rho^2`, regular at the origin with value
/// `-k/3`. Appears in the transform Jacobian as d(profile)/drho / rho.
pub(crate) fn profile_slope_ratio(k: f64, rho: f64) -> f64 {
    let x = rho * k.abs().sqrt();
    if x < RATIO_SERIES_THRESHOLD {
        let u = k * rho * rho;
        return k * (-1.0 / 3.0 + u * (1.0 / 30.0 + u * (-1.0 / 840.0 + u / 45360.0)));
    }
    (profile_cos(k, rho) - scaled_profile(k, rho)) / (rho * rho)
}

/// `(1 - scaled_profile^2)/rho^2`, regular at the origin with value `k/3`.
pub(crate) fn one_minus_profile_sq_ratio(k: f64, rho: f64) -> f64 {
    let x = rho * k.abs().sqrt();
    if x < RATIO_SERIES_THRESHOLD {
        let u = k * rho * rho;
        return k * (1.0 / 3.0 + u * (-2.0 / 45.0 + u * (1.0 / 315.0 - u * 2.0 / 14175.0)));
    }
    let p = scaled_profile(k, rho);
    (1.0 - p * p) / (rho * rho)
}

/// Original-chart radius reached at Fermi distance `rho`:
/// `r = sin(rho a)/a` resp. `sinh(rho a)/a`, or `rho` when flat.
pub fn r_of_rho(k: f64, rho: f64) -> Result<f64> {
    if rho < 0.0 || (k > 0.0 && rho * k.sqrt() > PI) {
        return Err(Error::OutsideChart(format!(
            "rho = {rho} outside the radial profile domain"
        )));
    }
    Ok(rho * scaled_profile(k, rho))
}

/// Fermi distance of an original-chart radius; inverse of [`r_of_rho`] on
/// the principal branch.
pub fn rho_of_r(k: f64, r: f64) -> Result<f64> {
    if r < 0.0 || (k > 0.0 && r * k.sqrt() > 1.0) {
        return Err(Error::OutsideChart(format!(
            "r = {r} outside the inverse radial profile domain"
        )));
    }
    Ok(r * inverse_profile(k, r))
}

/// The transformation from Fermi coordinates to the original chart:
/// `t = x^0`, each spatial coordinate is scaled by [`scaled_profile`].
///
/// Independent of `f` by construction; the result satisfies
/// `r = sin(rho a)/a` (resp. `sinh`).
pub fn fermi_to_cartesian(spec: &MetricSpec, fp: &SpacetimePoint) -> Result<SpacetimePoint> {
    fp.expect_chart(Chart::FermiCartesian)?;
    let rho = fp.spatial_norm();
    if !spec.fermi_domain_contains(rho) {
        return Err(Error::OutsideChart(format!(
            "rho = {rho} outside the Fermi chart (rho must stay below {})",
            spec.fermi_rho_sup()
        )));
    }
    let scale = scaled_profile(spec.k(), rho);
    let [x1, x2, x3] = fp.spatial();
    Ok(SpacetimePoint::cartesian_static(
        fp.time(),
        x1 * scale,
        x2 * scale,
        x3 * scale,
    ))
}

/// The inverse transformation, from the original chart to Fermi coordinates:
/// `x^0 = t`, spatial coordinates scaled by [`inverse_profile`].
pub fn cartesian_to_fermi(spec: &MetricSpec, p: &SpacetimePoint) -> Result<SpacetimePoint> {
    p.expect_chart(Chart::CartesianStatic)?;
    let r = p.spatial_norm();
    if !spec.spatial_domain_contains(r) || (spec.k() > 0.0 && r * spec.a() > 1.0) {
        return Err(Error::OutsideChart(format!(
            "r = {r} outside the static chart"
        )));
    }
    let scale = inverse_profile(spec.k(), r);
    let [x, y, z] = p.spatial();
    Ok(SpacetimePoint::fermi_cartesian(
        p.time(),
        x * scale,
        y * scale,
        z * scale,
    ))
}

/// Exact metric in Fermi coordinates:
/// `g_00 = -(1 - f)` evaluated at the mapped point, `g_0i = 0`, and
/// `g_ij = x^i x^j / rho^2 + profile^2 (delta_ij - x^i x^j / rho^2)`.
/// Equals the Minkowski metric on the worldline.
pub fn fermi_metric_at(spec: &MetricSpec, fp: &SpacetimePoint) -> Result<Metric4> {
    fp.expect_chart(Chart::FermiCartesian)?;
    let rho = fp.spatial_norm();
    if !spec.fermi_domain_contains(rho) {
        return Err(Error::OutsideChart(format!(
            "rho = {rho} outside the Fermi chart"
        )));
    }
    if rho == 0.0 {
        return Ok(Metric4::minkowski());
    }
    let mapped = fermi_to_cartesian(spec, fp)?;
    let [mx, my, mz] = mapped.spatial();
    let p_sq = scaled_profile(spec.k(), rho).powi(2);
    let xs = fp.spatial();
    let mut rows = [[0.0; 4]; 4];
    rows[0][0] = -(1.0 - spec.f_at(mx, my, mz));
    for i in 0..3 {
        for j in 0..3 {
            let radial = xs[i] * xs[j] / (rho * rho);
            let delta = if i == j { 1.0 } else { 0.0 };
            rows[i + 1][j + 1] = radial + p_sq * (delta - radial);
        }
    }
    Ok(Metric4::from_rows(rows))
}

/// Exact Fermi metric in polar form (t, rho, theta, phi):
/// `diag(g_00, 1, S^2, S^2 sin^2 theta)` with `S = sin(a rho)/a` resp.
/// `sinh(a rho)/a`.
pub fn fermi_polar_metric_at(spec: &MetricSpec, fp: &SpacetimePoint) -> Result<Metric4> {
    fp.expect_chart(Chart::FermiPolar)?;
    let [_t, rho, theta, phi] = fp.coords;
    if !spec.fermi_domain_contains(rho) {
        return Err(Error::OutsideChart(format!(
            "rho = {rho} outside the Fermi chart"
        )));
    }
    check_angles(theta, phi)?;
    let cartesian = polar_to_fermi_cartesian(fp)?;
    let g00 = if rho == 0.0 {
        -1.0
    } else {
        let mapped = fermi_to_cartesian(spec, &cartesian)?;
        let [mx, my, mz] = mapped.spatial();
        -(1.0 - spec.f_at(mx, my, mz))
    };
    let s = rho * scaled_profile(spec.k(), rho);
    Ok(Metric4::diagonal([
        g00,
        1.0,
        s * s,
        s * s * theta.sin().powi(2),
    ]))
}

/// Spherical-to-Cartesian map within the Fermi chart:
/// `x^1 = rho sin(theta) cos(phi)`, `x^2 = rho sin(theta) sin(phi)`,
/// `x^3 = rho cos(theta)`.
pub fn polar_to_fermi_cartesian(fp: &SpacetimePoint) -> Result<SpacetimePoint> {
    fp.expect_chart(Chart::FermiPolar)?;
    let [t, rho, theta, phi] = fp.coords;
    if rho < 0.0 {
        return Err(Error::OutsideChart(format!("rho = {rho} must be >= 0")));
    }
    Ok(SpacetimePoint::fermi_cartesian(
        t,
        rho * theta.sin() * phi.cos(),
        rho * theta.sin() * phi.sin(),
        rho * theta.cos(),
    ))
}

/// Jacobian `d(t, x, y, z)/d(x^0, x^1, x^2, x^3)` of [`fermi_to_cartesian`],
/// in closed form: the time row and column are the identity, and the spatial
/// block is `profile * delta_ij + x^i x^j (cos(a rho) - profile)/rho^2`.
pub fn transform_jacobian(spec: &MetricSpec, fp: &SpacetimePoint) -> Result<Matrix4<f64>> {
    fp.expect_chart(Chart::FermiCartesian)?;
    let rho = fp.spatial_norm();
    if !spec.fermi_domain_contains(rho) {
        return Err(Error::OutsideChart(format!(
            "rho = {rho} outside the Fermi chart"
        )));
    }
    let mut j = Matrix4::identity();
    if rho > 0.0 {
        let profile = scaled_profile(spec.k(), rho);
        let slope = profile_slope_ratio(spec.k(), rho);
        let xs = fp.spatial();
        for r in 0..3 {
            for c in 0..3 {
                let delta = if r == c { 1.0 } else { 0.0 };
                j[(r + 1, c + 1)] = profile * delta + xs[r] * xs[c] * slope;
            }
        }
    }
    Ok(j)
}

/// Jacobian of the spherical map `(t, rho, theta, phi) -> (t, x^1, x^2, x^3)`
/// used to pull the Cartesian Fermi metric back to polar form.
pub fn spherical_map_jacobian(rho: f64, theta: f64, phi: f64) -> Matrix4<f64> {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    let mut j = Matrix4::identity();
    j[(1, 1)] = st * cp;
    j[(1, 2)] = rho * ct * cp;
    j[(1, 3)] = -rho * st * sp;
    j[(2, 1)] = st * sp;
    j[(2, 2)] = rho * ct * sp;
    j[(2, 3)] = rho * st * cp;
    j[(3, 1)] = ct;
    j[(3, 2)] = -rho * st;
    j[(3, 3)] = 0.0;
    j
}
