//! Gaussian curvature of the (t, rho) submanifold, the Jacobi separation
//! initial value problem, its root structure, and horizon detection.
//!
//! With the angular coordinates frozen, the Fermi polar metric induces
//! `ds^2 = g_00(rho) dt^2 + drho^2` on a 2-dimensional slice. Writing
//! `w(rho) = sqrt(-g_00)`, the slice's Gaussian curvature is
//! `K = -w'' / w`, and `y(rho) = (t2 - t1) w(rho)` measures the separation
//! of the two spacelike geodesics leaving the worldline at times t1 and t2:
//! it solves `y'' + K y = 0` with `y(0) = t2 - t1`, `y'(0) = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::catalog::{CatalogEntry, SpacetimeKind};
use crate::error::{Error, Result};
use crate::ode::{dopri5, IntegratorConfig, StepOutcome};

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Fixed number of sample intervals for integrated separation profiles.
const PROFILE_INTERVALS: usize = 2048;

/// Sample count for the horizon scan grid.
const HORIZON_SCAN_SAMPLES: usize = 4096;

/// Absolute tolerance in rho for root and horizon bracketing.
const ROOT_TOLERANCE: f64 = 1e-12;

/// The (t, rho) submanifold of a catalog spacetime at fixed angles, carrying
/// the closed-form lapse `w(rho) = sqrt(-g_00(rho))` (signed, so it crosses
/// zero smoothly at a horizon) and the closed-form curvature.
#[derive(Clone)]
pub struct SubmanifoldSlice {
    kind: SpacetimeKind,
    theta: f64,
    phi: f64,
    lapse: RadialFn,
    curvature: RadialFn,
    rho_sup: f64,
    rho_closed: bool,
    /// Upper end of the horizon scan; the lapse formula remains smooth and
    /// evaluable up to here even where the chart itself has ended.
    scan_sup: f64,
}

impl fmt::Debug for SubmanifoldSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubmanifoldSlice")
            .field("kind", &self.kind)
            .field("theta", &self.theta)
            .field("phi", &self.phi)
            .field("rho_sup", &self.rho_sup)
            .finish()
    }
}

impl SubmanifoldSlice {
    /// Builds the slice through the equatorial plane (theta = pi/2, phi = 0).
    pub fn for_entry(entry: &CatalogEntry) -> Self {
        let spec = entry.spec();
        let a = spec.a();
        let rho_sup = spec.fermi_rho_sup();
        let rho_closed = spec.fermi_domain_contains(rho_sup);
        let (lapse, curvature, scan_sup): (RadialFn, RadialFn, f64) = match entry.kind() {
            SpacetimeKind::Minkowski => {
                (Arc::new(|_| 1.0), Arc::new(|_| 0.0), 20.0)
            }
            SpacetimeKind::DeSitter { .. } => (
                Arc::new(move |rho: f64| (a * rho).cos()),
                Arc::new(move |_| a * a),
                // Slightly past the horizon so the scan can bracket it.
                1.001 * rho_sup,
            ),
            SpacetimeKind::AntiDeSitter { .. } => (
                Arc::new(move |rho: f64| (a * rho).cosh()),
                Arc::new(move |_| -a * a),
                20.0 / a,
            ),
            SpacetimeKind::EinsteinStatic { .. } => {
                (Arc::new(|_| 1.0), Arc::new(|_| 0.0), rho_sup)
            }
            SpacetimeKind::InteriorSchwarzschild {
                mass,
                radius,
                lambda,
            } => {
                // w(rho) = (c1 - c2 cos(a rho)) / w(0), the central-lapse
                // normalized form of sqrt(A(r(rho))).
                let r0_sq = 1.0 / spec.k();
                let c1 =
                    0.5 * (3.0 - r0_sq * lambda) * (1.0 - radius * radius / r0_sq).sqrt();
                let c2 = 0.5 * (1.0 - r0_sq * lambda);
                let w0 = c1 - c2;
                debug_assert!(w0 > 0.0, "construction guarantees a positive lapse");
                let _ = mass;
                (
                    Arc::new(move |rho: f64| (c1 - c2 * (a * rho).cos()) / w0),
                    Arc::new(move |rho: f64| {
                        -c2 * a * a * (a * rho).cos() / (c1 - c2 * (a * rho).cos())
                    }),
                    rho_sup,
                )
            }
        };
        let slice = Self {
            kind: entry.kind(),
            theta: PI / 2.0,
            phi: 0.0,
            lapse,
            curvature,
            rho_sup,
            rho_closed,
            scan_sup,
        };
        debug_assert!((slice.lapse(0.0) - 1.0).abs() < 1e-12);
        slice
    }

    pub fn kind(&self) -> SpacetimeKind {
        self.kind
    }

    pub fn angles(&self) -> (f64, f64) {
        (self.theta, self.phi)
    }

    /// `g_00(rho) = -w(rho)^2`.
    pub fn g00(&self, rho: f64) -> f64 {
        let w = (self.lapse)(rho);
        -w * w
    }

    /// Signed `sqrt(-g_00)`; positive inside the chart, crossing zero at a
    /// horizon.
    pub fn lapse(&self, rho: f64) -> f64 {
        (self.lapse)(rho)
    }

    pub fn rho_sup(&self) -> f64 {
        self.rho_sup
    }

    pub fn contains(&self, rho: f64) -> bool {
        rho >= 0.0
            && if self.rho_closed {
                rho <= self.rho_sup
            } else {
                rho < self.rho_sup
            }
    }

    fn closed_form_curvature(&self, rho: f64) -> f64 {
        (self.curvature)(rho)
    }
}

/// Derivative source for [`gaussian_curvature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureMode {
    /// The catalog's closed-form expression.
    Analytic,
    /// 5-point second derivative of the closed-form lapse.
    FiniteDifference,
}

/// Gaussian curvature `K = -(1/w) d^2 w/drho^2` of the slice at `rho`.
pub fn gaussian_curvature(
    slice: &SubmanifoldSlice,
    rho: f64,
    mode: CurvatureMode,
) -> Result<f64> {
    if !slice.contains(rho) {
        return Err(Error::OutsideChart(format!(
            "rho = {rho} outside the slice domain [0, {})",
            slice.rho_sup()
        )));
    }
    let w = slice.lapse(rho);
    if w <= 0.0 {
        return Err(Error::OutsideChart(format!(
            "g_00 >= 0 at rho = {rho}: at or beyond the horizon"
        )));
    }
    match mode {
        CurvatureMode::Analytic => Ok(slice.closed_form_curvature(rho)),
        CurvatureMode::FiniteDifference => {
            // The lapse closures are even entire functions of rho, so the
            // stencil may reach below zero and past the chart boundary.
            let h = 1e-4 * rho.abs().max(1.0);
            let w2 = |d: f64| slice.lapse(rho + d);
            let second = (-w2(-2.0 * h) + 16.0 * w2(-h) - 30.0 * w + 16.0 * w2(h)
                - w2(2.0 * h))
                / (12.0 * h * h);
            Ok(-second / w)
        }
    }
}

/// Integrated separation profile: samples of `(rho, y, y')` together with
/// the curvature input, for `y'' + K(rho) y = 0`, `y(0) = delta_t`,
/// `y'(0) = 0`.
#[derive(Clone, Debug)]
pub struct JacobiProfile {
    pub delta_t: f64,
    pub rho: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    pub curvature: Vec<f64>,
}

impl JacobiProfile {
    pub fn rho_max(&self) -> f64 {
        *self.rho.last().expect("profile is non-empty")
    }

    /// Largest deviation from the closed-form solution
    /// `delta_t * w(rho)` over the samples.
    pub fn closed_form_deviation(&self, slice: &SubmanifoldSlice) -> f64 {
        self.rho
            .iter()
            .zip(&self.y)
            .map(|(&rho, &y)| (y - self.delta_t * slice.lapse(rho)).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates the separation equation out to `rho_max`.
pub fn jacobi_separation(
    slice: &SubmanifoldSlice,
    delta_t: f64,
    rho_max: f64,
    cfg: &IntegratorConfig,
) -> Result<JacobiProfile> {
    if !(delta_t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta_t = {delta_t} must be positive"
        )));
    }
    if !(rho_max > 0.0) || !slice.contains(rho_max) {
        return Err(Error::OutsideChart(format!(
            "rho_max = {rho_max} outside the slice domain"
        )));
    }
    let n = PROFILE_INTERVALS;
    let step = rho_max / n as f64;
    let mut profile = JacobiProfile {
        delta_t,
        rho: Vec::with_capacity(n + 1),
        y: Vec::with_capacity(n + 1),
        dy: Vec::with_capacity(n + 1),
        curvature: Vec::with_capacity(n + 1),
    };
    let mut state = vec![delta_t, 0.0];
    profile.rho.push(0.0);
    profile.y.push(delta_t);
    profile.dy.push(0.0);
    profile.curvature.push(slice.closed_form_curvature(0.0));

    let rhs = |rho: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        dy[0] = y[1];
        dy[1] = -slice.closed_form_curvature(rho) * y[0];
        Ok(())
    };
    for i in 0..n {
        let (from, to) = (i as f64 * step, (i + 1) as f64 * step);
        let run = dopri5(rhs, |_, _| StepOutcome::Continue, &state, from, to, cfg)?;
        state = run.y;
        profile.rho.push(to);
        profile.y.push(state[0]);
        profile.dy.push(state[1]);
        profile.curvature.push(slice.closed_form_curvature(to));
    }
    Ok(profile)
}

/// Smallest positive root of the integrated separation, if any: scans the
/// samples for a sign change and refines on the cubic Hermite interpolant.
pub fn first_positive_root(profile: &JacobiProfile) -> Option<f64> {
    for i in 0..profile.y.len() - 1 {
        let (r0, r1) = (profile.rho[i], profile.rho[i + 1]);
        let (y0, y1) = (profile.y[i], profile.y[i + 1]);
        if y0 == 0.0 && r0 > 0.0 {
            return Some(r0);
        }
        if y0 > 0.0 && y1 <= 0.0 || y0 < 0.0 && y1 >= 0.0 {
            let h = r1 - r0;
            let (d0, d1) = (profile.dy[i], profile.dy[i + 1]);
            let eval = |rho: f64| {
                let t = (rho - r0) / h;
                let t2 = t * t;
                let t3 = t2 * t;
                (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                    + (t3 - 2.0 * t2 + t) * h * d0
                    + (-2.0 * t3 + 3.0 * t2) * y1
                    + (t3 - t2) * h * d1
            };
            return Some(bisect(eval, r0, r1, ROOT_TOLERANCE));
        }
    }
    None
}

/// Ratio of proper time along the comoving path at Fermi distance `rho0` to
/// the Fermi coordinate time interval: `sqrt(-g_00(rho0))`.
///
/// The ratio is below 1 exactly when `g_00` has grown toward zero (de
/// Sitter); where `|g_00| > 1` (anti-de Sitter) the comoving clock runs
/// fast and the returned factor exceeds 1.
pub fn proper_time_factor(slice: &SubmanifoldSlice, rho0: f64) -> Result<f64> {
    if !slice.contains(rho0) {
        return Err(Error::OutsideChart(format!(
            "rho0 = {rho0} outside the slice domain"
        )));
    }
    let w = slice.lapse(rho0);
    if w <= 0.0 {
        return Err(Error::OutsideChart(format!(
            "rho0 = {rho0} is at or beyond the horizon"
        )));
    }
    Ok(w)
}

/// Locates the chart degeneracy `-g_00 -> 0`, if one exists: returns the
/// root of the lapse found by scanning and bisection, or the location where
/// `-g_00` dips below `tol` without crossing. `None` when `g_00` stays
/// bounded away from zero over the whole chart.
pub fn horizon_scan(slice: &SubmanifoldSlice, tol: f64) -> Option<f64> {
    let n = HORIZON_SCAN_SAMPLES;
    let hi = slice.scan_sup;
    let mut prev_rho = 0.0;
    let mut prev_w = slice.lapse(0.0);
    let mut min_sq = prev_w * prev_w;
    let mut min_at = 0.0;
    for i in 1..=n {
        let rho = hi * i as f64 / n as f64;
        let w = slice.lapse(rho);
        if prev_w > 0.0 && w <= 0.0 {
            let f = |r: f64| slice.lapse(r);
            return Some(bisect(f, prev_rho, rho, ROOT_TOLERANCE));
        }
        if w * w < min_sq {
            min_sq = w * w;
            min_at = rho;
        }
        prev_rho = rho;
        prev_w = w;
    }
    // No sign change; report a tangential degeneracy if -g00 got below tol.
    if min_sq < tol {
        return Some(min_at);
    }
    None
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if (flo > 0.0) == (fmid > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
