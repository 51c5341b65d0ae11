//! Numerical oracle: connection coefficients for any metric field, geodesic
//! integration, the exponential map, parallel-transport verification, and
//! the radial-line geodesic residual.
//!
//! Everything here deliberately avoids the closed-form chart
//! transformations, so agreement between the two routes is a genuine check.

use nalgebra::Matrix4;

use crate::catalog::{metric_components, CatalogEntry, MetricSpec, RadialProfiles, Tetrad};
use crate::chart::{
    fermi_metric_at, one_minus_profile_sq_ratio, profile_slope_ratio, scaled_profile,
};
use crate::error::{Error, Result};
use crate::metric::Metric4;
use crate::ode::{dopri5, StepOutcome};
pub use crate::ode::IntegratorConfig;
use crate::point::{Chart, SpacetimePoint};

/// Integration stops gracefully once `g_00` rises above this value: the
/// chart is degenerating (de Sitter horizon) and that is a reportable
/// condition, not a failure.
const G00_DEGENERACY_GUARD: f64 = -1e-10;

/// A metric presented as a function of raw chart coordinates, optionally
/// with exact partial derivatives.
pub trait MetricField {
    fn chart(&self) -> Chart;

    fn metric(&self, x: &[f64; 4]) -> Result<Metric4>;

    /// Exact `d g / d x^mu` when the field can provide it.
    fn metric_partial(&self, x: &[f64; 4], mu: usize) -> Option<Result<Metric4>> {
        let _ = (x, mu);
        None
    }
}

/// The family metric in its original Cartesian chart.
pub struct CartesianStaticField<'a> {
    spec: &'a MetricSpec,
}

impl<'a> CartesianStaticField<'a> {
    pub fn new(spec: &'a MetricSpec) -> Self {
        Self { spec }
    }
}

impl MetricField for CartesianStaticField<'_> {
    fn chart(&self) -> Chart {
        Chart::CartesianStatic
    }

    fn metric(&self, x: &[f64; 4]) -> Result<Metric4> {
        metric_components(self.spec, [x[1], x[2], x[3]])
    }

    fn metric_partial(&self, x: &[f64; 4], mu: usize) -> Option<Result<Metric4>> {
        if mu == 0 {
            return Some(Ok(Metric4::zeros()));
        }
        let l = mu - 1;
        let xs = [x[1], x[2], x[3]];
        let r_sq = xs.iter().map(|v| v * v).sum::<f64>();
        let w = 1.0 - self.spec.k() * r_sq;
        if w <= 0.0 || !self.spec.spatial_domain_contains(r_sq.sqrt()) {
            return Some(Err(Error::OutsideChart(format!(
                "r = {} outside the static chart",
                r_sq.sqrt()
            ))));
        }
        let k = self.spec.k();
        let grad = self.spec.grad_f_at(xs[0], xs[1], xs[2]);
        let mut rows = [[0.0; 4]; 4];
        rows[0][0] = grad[l];
        for i in 0..3 {
            for j in 0..3 {
                let di = if i == l { 1.0 } else { 0.0 };
                let dj = if j == l { 1.0 } else { 0.0 };
                rows[i + 1][j + 1] = k * (di * xs[j] + dj * xs[i]) / w
                    + 2.0 * k * k * xs[i] * xs[j] * xs[l] / (w * w);
            }
        }
        Some(Ok(Metric4::from_rows(rows)))
    }
}

/// The exact Fermi metric as a field over Fermi coordinates.
pub struct FermiField<'a> {
    spec: &'a MetricSpec,
}

impl<'a> FermiField<'a> {
    pub fn new(spec: &'a MetricSpec) -> Self {
        Self { spec }
    }
}

impl MetricField for FermiField<'_> {
    fn chart(&self) -> Chart {
        Chart::FermiCartesian
    }

    fn metric(&self, x: &[f64; 4]) -> Result<Metric4> {
        fermi_metric_at(
            self.spec,
            &SpacetimePoint::new(Chart::FermiCartesian, *x),
        )
    }

    fn metric_partial(&self, x: &[f64; 4], mu: usize) -> Option<Result<Metric4>> {
        if mu == 0 {
            return Some(Ok(Metric4::zeros()));
        }
        let l = mu - 1;
        let fp = SpacetimePoint::new(Chart::FermiCartesian, *x);
        let rho = fp.spatial_norm();
        if !self.spec.fermi_domain_contains(rho) {
            return Some(Err(Error::OutsideChart(format!(
                "rho = {rho} outside the Fermi chart"
            ))));
        }
        if rho == 0.0 {
            return Some(Ok(Metric4::zeros()));
        }
        let k = self.spec.k();
        let xs = fp.spatial();
        let profile = scaled_profile(k, rho);
        let slope = profile_slope_ratio(k, rho);
        let q = one_minus_profile_sq_ratio(k, rho);

        // g_00 = -1 + f(mapped point): chain rule through the transform.
        let mapped = [xs[0] * profile, xs[1] * profile, xs[2] * profile];
        let grad = self.spec.grad_f_at(mapped[0], mapped[1], mapped[2]);
        let mut dg00 = 0.0;
        for m in 0..3 {
            let dm = if m == l { 1.0 } else { 0.0 };
            dg00 += grad[m] * (profile * dm + xs[m] * xs[l] * slope);
        }

        let rho_sq = rho * rho;
        let two_p_slope = 2.0 * profile * slope;
        let mut rows = [[0.0; 4]; 4];
        rows[0][0] = dg00;
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                let di = if i == l { 1.0 } else { 0.0 };
                let dj = if j == l { 1.0 } else { 0.0 };
                let radial = xs[i] * xs[j] / rho_sq;
                rows[i + 1][j + 1] = two_p_slope * xs[l] * (delta - radial)
                    + q * (di * xs[j] + dj * xs[i] - 2.0 * radial * xs[l]);
            }
        }
        Some(Ok(Metric4::from_rows(rows)))
    }
}

/// The diagonal spherical representation of a catalog entry.
pub struct StaticSphericalField<'a> {
    radial: &'a RadialProfiles,
    spec: &'a MetricSpec,
}

impl<'a> StaticSphericalField<'a> {
    pub fn new(entry: &'a CatalogEntry) -> Self {
        Self {
            radial: entry.radial(),
            spec: entry.spec(),
        }
    }
}

impl MetricField for StaticSphericalField<'_> {
    fn chart(&self) -> Chart {
        Chart::StaticSpherical
    }

    fn metric(&self, x: &[f64; 4]) -> Result<Metric4> {
        let [_t, r, theta, _phi] = *x;
        if !self.spec.spatial_domain_contains(r) {
            return Err(Error::OutsideChart(format!(
                "r = {r} outside the static chart"
            )));
        }
        Ok(Metric4::diagonal([
            (self.radial.g_tt)(r),
            (self.radial.g_rr)(r),
            r * r,
            r * r * theta.sin().powi(2),
        ]))
    }

    fn metric_partial(&self, x: &[f64; 4], mu: usize) -> Option<Result<Metric4>> {
        let [_t, r, theta, _phi] = *x;
        if !self.spec.spatial_domain_contains(r) {
            return Some(Err(Error::OutsideChart(format!(
                "r = {r} outside the static chart"
            ))));
        }
        let d = match mu {
            1 => [
                (self.radial.dg_tt)(r),
                (self.radial.dg_rr)(r),
                2.0 * r,
                2.0 * r * theta.sin().powi(2),
            ],
            2 => [0.0, 0.0, 0.0, 2.0 * r * r * theta.sin() * theta.cos()],
            _ => [0.0; 4],
        };
        Some(Ok(Metric4::diagonal(d)))
    }
}

/// Derivative source for the connection coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChristoffelMode {
    /// Use the field's exact metric derivatives.
    Exact,
    /// Central differences of the metric components; `step = None` selects
    /// `eps^(1/3) * max(1, |x^mu|)` per coordinate.
    FiniteDifference { step: Option<f64> },
}

/// Connection coefficients `Gamma^nu_{alpha beta}` at a point, symmetric in
/// the lower indices.
#[derive(Clone, Copy, Debug)]
pub struct Christoffel4(pub [[[f64; 4]; 4]; 4]);

impl Christoffel4 {
    pub fn component(&self, nu: usize, alpha: usize, beta: usize) -> f64 {
        self.0[nu][alpha][beta]
    }

    pub fn max_abs(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for plane in &self.0 {
            for row in plane {
                for v in row {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}

/// Connection coefficients of an arbitrary metric field at a point.
pub fn christoffel_at(
    field: &dyn MetricField,
    x: &[f64; 4],
    mode: ChristoffelMode,
) -> Result<Christoffel4> {
    let g = field.metric(x)?;
    let ginv = g.inverse()?;
    let mut dg = [Metric4::zeros(); 4];
    match mode {
        ChristoffelMode::Exact => {
            for (mu, slot) in dg.iter_mut().enumerate() {
                *slot = field
                    .metric_partial(x, mu)
                    .ok_or(Error::NoExactDerivatives)??;
            }
        }
        ChristoffelMode::FiniteDifference { step } => {
            if let Some(h) = step {
                if !(h > 0.0) {
                    return Err(Error::InvalidParameter(
                        "finite-difference step must be positive".into(),
                    ));
                }
            }
            let eps_cbrt = f64::EPSILON.powf(1.0 / 3.0);
            for (mu, slot) in dg.iter_mut().enumerate() {
                let h = step.unwrap_or_else(|| eps_cbrt * x[mu].abs().max(1.0));
                let mut up = *x;
                let mut dn = *x;
                up[mu] += h;
                dn[mu] -= h;
                let gu = field.metric(&up)?;
                let gd = field.metric(&dn)?;
                let mut rows = [[0.0; 4]; 4];
                for (i, row) in rows.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = (gu.component(i, j) - gd.component(i, j)) / (2.0 * h);
                    }
                }
                *slot = Metric4::from_rows(rows);
            }
        }
    }
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for nu in 0..4 {
        for alpha in 0..4 {
            for beta in alpha..4 {
                let mut s = 0.0;
                for mu in 0..4 {
                    s += ginv[(nu, mu)]
                        * (dg[alpha].component(mu, beta) + dg[beta].component(mu, alpha)
                            - dg[mu].component(alpha, beta));
                }
                gamma[nu][alpha][beta] = 0.5 * s;
                gamma[nu][beta][alpha] = 0.5 * s;
            }
        }
    }
    Ok(Christoffel4(gamma))
}

/// Position and 4-velocity along an affinely parametrized geodesic.
#[derive(Clone, Copy, Debug)]
pub struct GeodesicState {
    pub point: SpacetimePoint,
    /// d(coordinates)/ds.
    pub velocity: [f64; 4],
}

impl GeodesicState {
    pub fn new(point: SpacetimePoint, velocity: [f64; 4]) -> Self {
        Self { point, velocity }
    }
}

/// Why an integration ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegrationStatus {
    Completed,
    /// The chart degenerated (`g_00` reached the guard) before `s_end`.
    BoundaryStop { s: f64 },
}

/// Geodesic sampled at the integrator's accepted steps.
#[derive(Clone, Debug)]
pub struct GeodesicPath {
    pub samples: Vec<(f64, GeodesicState)>,
    pub status: IntegrationStatus,
}

impl GeodesicPath {
    pub fn endpoint(&self) -> &GeodesicState {
        &self.samples.last().expect("path has at least one sample").1
    }
}

/// Integrates the geodesic equation as eight first-order equations from
/// `state0` to affine parameter `s_end`.
///
/// `g(v, v)` is conserved along the result to within the integrator
/// tolerance; approach to a chart boundary surfaces either as a
/// `BoundaryStop` status (metric degeneracy) or a step-size underflow.
pub fn integrate_geodesic(
    field: &dyn MetricField,
    state0: &GeodesicState,
    s_end: f64,
    cfg: &IntegratorConfig,
) -> Result<GeodesicPath> {
    state0.point.expect_chart(field.chart())?;
    let x0 = state0.point.coords;
    let norm0 = field.metric(&x0)?.norm_of(&state0.velocity);
    if !norm0.is_finite() {
        return Err(Error::InvalidParameter(
            "initial velocity has non-finite norm".into(),
        ));
    }
    let mode = if field.metric_partial(&x0, 0).is_some() {
        ChristoffelMode::Exact
    } else {
        ChristoffelMode::FiniteDifference { step: None }
    };

    let mut y0 = [0.0; 8];
    y0[..4].copy_from_slice(&x0);
    y0[4..].copy_from_slice(&state0.velocity);

    let rhs = |_s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let x = [y[0], y[1], y[2], y[3]];
        let v = [y[4], y[5], y[6], y[7]];
        let gamma = christoffel_at(field, &x, mode)?;
        dy[..4].copy_from_slice(&v);
        for nu in 0..4 {
            let mut acc = 0.0;
            for alpha in 0..4 {
                for beta in 0..4 {
                    acc += gamma.0[nu][alpha][beta] * v[alpha] * v[beta];
                }
            }
            dy[4 + nu] = -acc;
        }
        Ok(())
    };

    let mut samples: Vec<(f64, GeodesicState)> = Vec::new();
    let chart = field.chart();
    let observer = |s: f64, y: &[f64]| -> StepOutcome {
        let x = [y[0], y[1], y[2], y[3]];
        let state = GeodesicState::new(
            SpacetimePoint::new(chart, x),
            [y[4], y[5], y[6], y[7]],
        );
        samples.push((s, state));
        match field.metric(&x) {
            Ok(g) if g.component(0, 0) <= G00_DEGENERACY_GUARD => StepOutcome::Continue,
            _ => StepOutcome::Halt,
        }
    };

    let run = dopri5(rhs, observer, &y0, 0.0, s_end, cfg)?;
    let status = if run.halted {
        // Drop the degenerate sample but keep the last good one.
        if samples.len() > 1 {
            samples.pop();
        }
        IntegrationStatus::BoundaryStop { s: run.s }
    } else {
        IntegrationStatus::Completed
    };
    Ok(GeodesicPath { samples, status })
}

/// The exponential map of the original chart: follows the geodesic leaving
/// the worldline point `(tau, 0, 0, 0)` with unit spacelike direction
/// `direction` (components along the parallel frame) for proper distance `s`.
pub fn exponential_map(
    spec: &MetricSpec,
    tau: f64,
    direction: [f64; 3],
    s: f64,
    cfg: &IntegratorConfig,
) -> Result<SpacetimePoint> {
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "direction must be a unit vector, |d| = {norm}"
        )));
    }
    let start = SpacetimePoint::cartesian_static(tau, 0.0, 0.0, 0.0);
    if s == 0.0 {
        return Ok(start);
    }
    // The frame vectors coincide with the coordinate axes on the worldline.
    let tetrad = Tetrad::coordinate_aligned();
    let mut velocity = [0.0; 4];
    for (j, d) in direction.iter().enumerate() {
        for (v, e) in velocity.iter_mut().zip(&tetrad.vectors[j + 1]) {
            *v += d * e;
        }
    }
    let field = CartesianStaticField::new(spec);
    let path = integrate_geodesic(&field, &GeodesicState::new(start, velocity), s, cfg)?;
    match path.status {
        IntegrationStatus::Completed => Ok(path.endpoint().point),
        IntegrationStatus::BoundaryStop { s: stop } => Err(Error::OutsideChart(format!(
            "geodesic reached the chart boundary at s = {stop} before s = {s}"
        ))),
    }
}

/// Largest residual of the geodesic equation along the straight Fermi ray
/// `(t, s d^1, s d^2, s d^3)`, evaluated at `n_samples` points up to
/// `s_max`. Closed-form Fermi charts make this vanish identically; the
/// number returned is the numerical size of that claim.
pub fn radial_geodesic_residual(
    spec: &MetricSpec,
    direction: [f64; 3],
    s_max: f64,
    n_samples: usize,
    mode: ChristoffelMode,
) -> Result<f64> {
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "direction must be a unit vector, |d| = {norm}"
        )));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be >= 1".into()));
    }
    if !spec.fermi_domain_contains(s_max) {
        return Err(Error::OutsideChart(format!(
            "s_max = {s_max} outside the Fermi chart"
        )));
    }
    let field = FermiField::new(spec);
    let mut worst: f64 = 0.0;
    for i in 0..n_samples {
        let s = s_max * (i + 1) as f64 / n_samples as f64;
        let x = [
            0.0,
            s * direction[0],
            s * direction[1],
            s * direction[2],
        ];
        let gamma = christoffel_at(&field, &x, mode)?;
        for nu in 0..4 {
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    acc += gamma.0[nu][i + 1][j + 1] * direction[i] * direction[j];
                }
            }
            worst = worst.max(acc.abs());
        }
    }
    Ok(worst)
}

/// Transports the coordinate-aligned frame along the central worldline and
/// returns the largest componentwise drift from its initial value. The
/// frame is parallel, so the drift measures integration plus connection
/// noise only.
pub fn parallel_transport_check(
    spec: &MetricSpec,
    tau_span: (f64, f64),
    mode: ChristoffelMode,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let field = CartesianStaticField::new(spec);
    let tetrad = Tetrad::coordinate_aligned();
    let mut y0 = [0.0; 16];
    for alpha in 0..4 {
        for mu in 0..4 {
            y0[4 * alpha + mu] = tetrad.vectors[alpha][mu];
        }
    }
    let rhs = |tau: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        // The worldline is known: x = (tau, 0, 0, 0), u = (1, 0, 0, 0).
        let x = [tau, 0.0, 0.0, 0.0];
        let gamma = christoffel_at(&field, &x, mode)?;
        for alpha in 0..4 {
            for mu in 0..4 {
                let mut acc = 0.0;
                for lambda in 0..4 {
                    acc += gamma.0[mu][0][lambda] * y[4 * alpha + lambda];
                }
                dy[4 * alpha + mu] = -acc;
            }
        }
        Ok(())
    };
    let mut drift: f64 = 0.0;
    let observer = |_tau: f64, y: &[f64]| -> StepOutcome {
        for (i, v) in y.iter().enumerate() {
            drift = drift.max((v - y0[i]).abs());
        }
        StepOutcome::Continue
    };
    dopri5(rhs, observer, &y0, tau_span.0, tau_span.1, cfg)?;
    Ok(drift)
}

/// Pullback `J^T G J` of a metric through a Jacobian; equals the metric in
/// the source coordinates when `J` is the chart transformation's Jacobian.
pub fn pullback(g: &Metric4, j: &Matrix4<f64>) -> Metric4 {
    Metric4::from_matrix(j.transpose() * g.as_matrix() * j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_catalog_entry, metric_at, SpacetimeKind};
    use crate::chart::{fermi_to_cartesian, transform_jacobian};

    fn entry(kind: SpacetimeKind) -> crate::catalog::CatalogEntry {
        make_catalog_entry(kind).unwrap()
    }

    #[test]
    fn christoffels_vanish_for_minkowski() {
        let e = entry(SpacetimeKind::Minkowski);
        let field = CartesianStaticField::new(e.spec());
        let x = [1.0, 0.3, -0.4, 2.0];
        for mode in [
            ChristoffelMode::Exact,
            ChristoffelMode::FiniteDifference { step: None },
        ] {
            let gamma = christoffel_at(&field, &x, mode).unwrap();
            assert!(gamma.max_abs() < 1e-12);
        }
    }

    #[test]
    fn christoffels_vanish_on_worldline() {
        for kind in [
            SpacetimeKind::DeSitter { lambda: 3.0 },
            SpacetimeKind::AntiDeSitter { lambda: -3.0 },
            SpacetimeKind::EinsteinStatic { radius: 1.0 },
            SpacetimeKind::InteriorSchwarzschild {
                mass: 0.25,
                radius: 1.0,
                lambda: 0.0,
            },
        ] {
            let e = entry(kind);
            let field = CartesianStaticField::new(e.spec());
            let x = [2.5, 0.0, 0.0, 0.0];
            let exact = christoffel_at(&field, &x, ChristoffelMode::Exact).unwrap();
            assert!(exact.max_abs() < 1e-14, "{kind:?} exact");
            let fd =
                christoffel_at(&field, &x, ChristoffelMode::FiniteDifference { step: None })
                    .unwrap();
            assert!(fd.max_abs() < 1e-8, "{kind:?} fd");
        }
    }

    #[test]
    fn de_sitter_spherical_christoffel() {
        // Gamma^r_tt = -(lambda r / 3)(1 - lambda r^2 / 3) for the diagonal
        // static form; at lambda = 3, r = 1/2 this is -0.375.
        let e = entry(SpacetimeKind::DeSitter { lambda: 3.0 });
        let field = StaticSphericalField::new(&e);
        let x = [0.0, 0.5, std::f64::consts::FRAC_PI_2, 0.0];
        let gamma = christoffel_at(&field, &x, ChristoffelMode::Exact).unwrap();
        assert!((gamma.component(1, 0, 0) + 0.375).abs() < 1e-14);
        let fd = christoffel_at(&field, &x, ChristoffelMode::FiniteDifference { step: None })
            .unwrap();
        assert!((fd.component(1, 0, 0) + 0.375).abs() < 1e-9);
    }

    #[test]
    fn finite_difference_converges_quadratically() {
        let e = entry(SpacetimeKind::AntiDeSitter { lambda: -3.0 });
        let field = CartesianStaticField::new(e.spec());
        let x = [0.0, 0.4, 0.2, -0.3];
        let exact = christoffel_at(&field, &x, ChristoffelMode::Exact).unwrap();
        let err_at = |h: f64| {
            let fd = christoffel_at(
                &field,
                &x,
                ChristoffelMode::FiniteDifference { step: Some(h) },
            )
            .unwrap();
            let mut worst: f64 = 0.0;
            for nu in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        worst = worst
                            .max((fd.component(nu, a, b) - exact.component(nu, a, b)).abs());
                    }
                }
            }
            worst
        };
        let e1 = err_at(2e-3);
        let e2 = err_at(1e-3);
        let ratio = e1 / e2;
        assert!(
            (2.5..6.0).contains(&ratio),
            "expected ~4x error reduction, got {ratio} ({e1} -> {e2})"
        );
    }

    #[test]
    fn straight_lines_in_flat_space() {
        let e = entry(SpacetimeKind::Minkowski);
        let field = CartesianStaticField::new(e.spec());
        let start = GeodesicState::new(
            SpacetimePoint::cartesian_static(1.0, 2.0, 3.0, 4.0),
            [1.0, 0.0, 0.0, 0.0],
        );
        let path =
            integrate_geodesic(&field, &start, 5.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(path.status, IntegrationStatus::Completed);
        let end = path.endpoint();
        assert!((end.point.coords[0] - 6.0).abs() < 1e-12);
        assert!((end.point.coords[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn anti_de_sitter_radial_geodesic_matches_closed_form() {
        let e = entry(SpacetimeKind::AntiDeSitter { lambda: -3.0 });
        let field = CartesianStaticField::new(e.spec());
        let start = GeodesicState::new(
            SpacetimePoint::cartesian_static(0.0, 0.0, 0.0, 0.0),
            [0.0, 1.0, 0.0, 0.0],
        );
        let cfg = IntegratorConfig::default();
        let path = integrate_geodesic(&field, &start, 1.0, &cfg).unwrap();
        let end = path.endpoint();
        assert!((end.point.coords[1] - 1.0f64.sinh()).abs() < 1e-9);

        // Norm conservation along the way.
        for (_s, state) in &path.samples {
            let g = field.metric(&state.point.coords).unwrap();
            let n = g.norm_of(&state.velocity);
            assert!((n - 1.0).abs() < 10.0 * cfg.rtol * 2.0);
        }
    }

    #[test]
    fn fermi_chart_radial_rays_integrate_straight() {
        // A purely radial spacelike start at the origin of the Fermi chart
        // must stay on its coordinate ray.
        let e = entry(SpacetimeKind::DeSitter { lambda: 3.0 });
        let field = FermiField::new(e.spec());
        let dir = [0.6, -0.48, 0.64];
        let start = GeodesicState::new(
            SpacetimePoint::fermi_cartesian(0.3, 0.0, 0.0, 0.0),
            [0.0, dir[0], dir[1], dir[2]],
        );
        let s_end = 1.2;
        let path =
            integrate_geodesic(&field, &start, s_end, &IntegratorConfig::default()).unwrap();
        assert_eq!(path.status, IntegrationStatus::Completed);
        for (s, state) in &path.samples {
            assert!((state.point.coords[0] - 0.3).abs() < 1e-9);
            for (i, d) in dir.iter().enumerate() {
                assert!((state.point.coords[i + 1] - s * d).abs() < 1e-9, "s={s}");
            }
        }
    }

    #[test]
    fn exponential_map_examples() {
        let cfg = IntegratorConfig::default();
        let ds = entry(SpacetimeKind::DeSitter { lambda: 3.0 });
        let p = exponential_map(ds.spec(), 0.0, [1.0, 0.0, 0.0], 0.0, &cfg).unwrap();
        assert_eq!(p.coords, [0.0, 0.0, 0.0, 0.0]);

        let s = std::f64::consts::FRAC_PI_3;
        let p = exponential_map(ds.spec(), 2.0, [1.0, 0.0, 0.0], s, &cfg).unwrap();
        assert!((p.coords[0] - 2.0).abs() < 1e-8);
        assert!((p.coords[1] - s.sin()).abs() < 1e-8);

        let es = entry(SpacetimeKind::EinsteinStatic { radius: 1.0 });
        let p = exponential_map(es.spec(), 0.0, [0.0, 0.0, 1.0], 1.0, &cfg).unwrap();
        assert!((p.coords[3] - 1.0f64.sin()).abs() < 1e-8);
        assert!(p.coords[1].abs() < 1e-10);
    }

    #[test]
    fn exponential_map_agrees_with_transform() {
        let cfg = IntegratorConfig::default();
        for kind in [
            SpacetimeKind::DeSitter { lambda: 3.0 },
            SpacetimeKind::AntiDeSitter { lambda: -3.0 },
            SpacetimeKind::InteriorSchwarzschild {
                mass: 0.25,
                radius: 1.0,
                lambda: 0.1,
            },
        ] {
            let e = entry(kind);
            let dir = [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
            let s = 0.8 * e.spec().fermi_rho_sup().min(2.0);
            let via_ode = exponential_map(e.spec(), 0.5, dir, s, &cfg).unwrap();
            let via_formula = fermi_to_cartesian(
                e.spec(),
                &SpacetimePoint::fermi_cartesian(0.5, s * dir[0], s * dir[1], s * dir[2]),
            )
            .unwrap();
            for mu in 0..4 {
                assert!(
                    (via_ode.coords[mu] - via_formula.coords[mu]).abs() < 1e-7,
                    "{kind:?} mu={mu}"
                );
            }
        }
    }

    #[test]
    fn exponential_map_is_time_translation_invariant() {
        let cfg = IntegratorConfig::default();
        let e = entry(SpacetimeKind::DeSitter { lambda: 3.0 });
        let dir = [0.6, 0.8, 0.0];
        let a = exponential_map(e.spec(), 0.0, dir, 1.2, &cfg).unwrap();
        let b = exponential_map(e.spec(), 1.7, dir, 1.2, &cfg).unwrap();
        assert!((b.coords[0] - a.coords[0] - 1.7).abs() < 1e-9);
        for mu in 1..4 {
            assert!((b.coords[mu] - a.coords[mu]).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_stop_near_horizon() {
        let e = entry(SpacetimeKind::DeSitter { lambda: 3.0 });
        // Long enough to hit the horizon at rho = pi/2.
        let err = exponential_map(
            e.spec(),
            0.0,
            [1.0, 0.0, 0.0],
            1.57,
            &IntegratorConfig::default(),
        );
        // Either a graceful boundary report or a step underflow is
        // acceptable this close to the horizon.
        match err {
            Ok(p) => assert!(p.coords[1] < 1.0),
            Err(Error::OutsideChart(_)) | Err(Error::StepSizeUnderflow { .. }) => {}
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn radial_residual_vanishes() {
        let flat = entry(SpacetimeKind::Minkowski);
        let r = radial_geodesic_residual(
            flat.spec(),
            [1.0, 0.0, 0.0],
            2.0,
            10,
            ChristoffelMode::Exact,
        )
        .unwrap();
        assert_eq!(r, 0.0);

        let ds = entry(SpacetimeKind::DeSitter { lambda: 3.0 });
        let dir = [0.48, 0.6, 0.64];
        let r = radial_geodesic_residual(ds.spec(), dir, 1.4, 50, ChristoffelMode::Exact)
            .unwrap();
        assert!(r < 1e-8, "de Sitter residual {r}");

        let is = entry(SpacetimeKind::InteriorSchwarzschild {
            mass: 0.25,
            radius: 1.0,
            lambda: 0.0,
        });
        let r = radial_geodesic_residual(
            is.spec(),
            [0.0, 1.0, 0.0],
            0.999 * is.spec().fermi_rho_sup(),
            50,
            ChristoffelMode::Exact,
        )
        .unwrap();
        assert!(r < 1e-8, "interior Schwarzschild residual {r}");
    }

    #[test]
    fn parallel_transport_stays_put() {
        let cfg = IntegratorConfig::default();
        let flat = entry(SpacetimeKind::Minkowski);
        let drift = parallel_transport_check(
            flat.spec(),
            (0.0, 10.0),
            ChristoffelMode::Exact,
            &cfg,
        )
        .unwrap();
        assert_eq!(drift, 0.0);

        for kind in [
            SpacetimeKind::DeSitter { lambda: 3.0 },
            SpacetimeKind::AntiDeSitter { lambda: -3.0 },
            SpacetimeKind::InteriorSchwarzschild {
                mass: 0.25,
                radius: 1.0,
                lambda: -0.1,
            },
        ] {
            let e = entry(kind);
            let drift = parallel_transport_check(
                e.spec(),
                (0.0, 10.0),
                ChristoffelMode::FiniteDifference { step: None },
                &cfg,
            )
            .unwrap();
            assert!(drift < 1e-10, "{kind:?} drift {drift}");
        }

        // Long-horizon run with a weaker cosmological constant.
        let e = entry(SpacetimeKind::DeSitter { lambda: 0.3 });
        let drift = parallel_transport_check(
            e.spec(),
            (0.0, 100.0),
            ChristoffelMode::FiniteDifference { step: None },
            &cfg,
        )
        .unwrap();
        assert!(drift < 1e-8, "drift {drift}");
    }

    #[test]
    fn pullback_reproduces_fermi_metric() {
        let e = entry(SpacetimeKind::AntiDeSitter { lambda: -3.0 });
        let fp = SpacetimePoint::fermi_cartesian(0.0, 0.7, -0.3, 0.5);
        let j = transform_jacobian(e.spec(), &fp).unwrap();
        let g = metric_at(e.spec(), &fermi_to_cartesian(e.spec(), &fp).unwrap()).unwrap();
        let pulled = pullback(&g, &j);
        let fermi = fermi_metric_at(e.spec(), &fp).unwrap();
        assert!(pulled.max_abs_diff(&fermi) < 1e-12);
    }
}
