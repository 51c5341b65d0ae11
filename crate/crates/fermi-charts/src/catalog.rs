//! The static metric family and the catalog of example spacetimes.
//!
//! Every spacetime handled by this crate is an instance of the line element
//!
//! ```text
//! ds^2 = -(1 - f(x,y,z)) dt^2 + dx^2 + dy^2 + dz^2
//!        + [ (1 - k r^2)^-1 - 1 ] dr^2,          r^2 = x^2 + y^2 + z^2,
//! ```
//!
//! where `f` is smooth and vanishes with its gradient at the origin, and `k`
//! is a real constant. The catalog instantiates de Sitter and anti-de Sitter
//! space, the Einstein static universe, the interior constant-density
//! Schwarzschild solution with cosmological constant, and flat space.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::Metric4;
use crate::point::{check_angles, Chart, SpacetimePoint};

type ScalarField = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
type GradientField = Arc<dyn Fn(f64, f64, f64) -> [f64; 3] + Send + Sync>;
type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A member of the metric family: the scalar field `f` with its exact
/// gradient, the curvature constant `k`, and the chart domains.
#[derive(Clone)]
pub struct MetricSpec {
    f: ScalarField,
    grad_f: GradientField,
    k: f64,
    a: f64,
    spatial_r_sup: f64,
    spatial_r_closed: bool,
    fermi_rho_sup: f64,
    fermi_rho_closed: bool,
}

impl fmt::Debug for MetricSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("MetricSpec")
            .field("k", &self.k)
            .field("a", &self.a)
            .field("spatial_r_sup", &self.spatial_r_sup)
            .field("fermi_rho_sup", &self.fermi_rho_sup)
            .finish()
    }
}

impl MetricSpec {
    /// General-family constructor with the default chart domains implied by
    /// `k`: for `k > 0` the original chart covers `r < 1/sqrt(k)` and the
    /// Fermi chart `rho < pi/(2 sqrt(k))`; for `k <= 0` both are unbounded.
    ///
    /// `f` and its gradient must vanish at the origin; that is what makes
    /// the central worldline a geodesic with a parallel coordinate frame.
    pub fn new(f: ScalarField, grad_f: GradientField, k: f64) -> Self {
        debug_assert!(f(0.0, 0.0, 0.0).abs() < 1e-12);
        debug_assert!(grad_f(0.0, 0.0, 0.0).iter().all(|g| g.abs() < 1e-12));
        let a = k.abs().sqrt();
        let (r_sup, rho_sup) = if k > 0.0 {
            (1.0 / a, PI / (2.0 * a))
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        Self {
            f,
            grad_f,
            k,
            a,
            spatial_r_sup: r_sup,
            spatial_r_closed: false,
            fermi_rho_sup: rho_sup,
            fermi_rho_closed: false,
        }
    }

    pub fn minkowski() -> Self {
        Self::new(
            Arc::new(|_, _, _| 0.0),
            Arc::new(|_, _, _| [0.0; 3]),
            0.0,
        )
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `a = sqrt(|k|)`; zero in the flat case.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn f_at(&self, x: f64, y: f64, z: f64) -> f64 {
        (self.f)(x, y, z)
    }

    pub fn grad_f_at(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        (self.grad_f)(x, y, z)
    }

    pub fn spatial_domain_contains(&self, r: f64) -> bool {
        if r < 0.0 || !r.is_finite() {
            return false;
        }
        if self.spatial_r_closed {
            r <= self.spatial_r_sup
        } else {
            r < self.spatial_r_sup
        }
    }

    pub fn fermi_domain_contains(&self, rho: f64) -> bool {
        if rho < 0.0 || !rho.is_finite() {
            return false;
        }
        if self.fermi_rho_closed {
            rho <= self.fermi_rho_sup
        } else {
            rho < self.fermi_rho_sup
        }
    }

    pub fn spatial_r_sup(&self) -> f64 {
        self.spatial_r_sup
    }

    pub fn fermi_rho_sup(&self) -> f64 {
        self.fermi_rho_sup
    }

    /// Largest `rho` on which the closed-form inverse transformation is
    /// single-valued. Differs from `fermi_rho_sup` only for the extended
    /// Einstein-static chart.
    pub fn invertible_rho_sup(&self) -> f64 {
        if self.k > 0.0 {
            self.fermi_rho_sup.min(PI / (2.0 * self.a))
        } else {
            f64::INFINITY
        }
    }

    /// Coefficient of `x_i x_j` in the spatial metric block. Algebraically
    /// `((1 - k r^2)^-1 - 1)/r^2 = k/(1 - k r^2)`, which is the exact sum of
    /// the series `k + k^2 r^2 + ...` and stays finite at `r = 0`.
    pub(crate) fn dr2_coefficient(&self, r: f64) -> f64 {
        self.k / (1.0 - self.k * r * r)
    }

    fn with_spatial_domain(mut self, sup: f64, closed: bool) -> Self {
        self.spatial_r_sup = sup;
        self.spatial_r_closed = closed;
        self
    }

    fn with_fermi_domain(mut self, sup: f64, closed: bool) -> Self {
        self.fermi_rho_sup = sup;
        self.fermi_rho_closed = closed;
        self
    }
}

/// Which catalog spacetime, with its defining parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacetimeKind {
    Minkowski,
    DeSitter { lambda: f64 },
    AntiDeSitter { lambda: f64 },
    EinsteinStatic { radius: f64 },
    InteriorSchwarzschild { mass: f64, radius: f64, lambda: f64 },
}

impl SpacetimeKind {
    pub fn label(&self) -> String {
        match self {
            SpacetimeKind::Minkowski => "minkowski".to_string(),
            SpacetimeKind::DeSitter { lambda } => format!("de_sitter(lambda={lambda})"),
            SpacetimeKind::AntiDeSitter { lambda } => {
                format!("anti_de_sitter(lambda={lambda})")
            }
            SpacetimeKind::EinsteinStatic { radius } => {
                format!("einstein_static(R={radius})")
            }
            SpacetimeKind::InteriorSchwarzschild {
                mass,
                radius,
                lambda,
            } => format!("interior_schwarzschild(M={mass}, R={radius}, lambda={lambda})"),
        }
    }
}

/// Diagonal radial profiles of the static spherical form
/// `ds^2 = g_tt(r) dt^2 + g_rr(r) dr^2 + r^2 dOmega^2`, with exact
/// r-derivatives. For the interior Schwarzschild entry these are written in
/// the original (unrescaled) time coordinate.
#[derive(Clone)]
pub(crate) struct RadialProfiles {
    pub g_tt: RadialFn,
    pub dg_tt: RadialFn,
    pub g_rr: RadialFn,
    pub dg_rr: RadialFn,
}

/// A resolved catalog spacetime: the `MetricSpec` it reduces to, plus the
/// pieces needed for the independent spherical representation.
#[derive(Clone)]
pub struct CatalogEntry {
    kind: SpacetimeKind,
    spec: MetricSpec,
    /// Only the Einstein static universe admits the extended Fermi chart
    /// `rho < pi R`.
    extended_fermi_chart: bool,
    /// Factor between the Cartesian-chart time and the spherical-chart time;
    /// `sqrt(A(0))` for interior Schwarzschild, 1 elsewhere.
    time_rescale: f64,
    radial: RadialProfiles,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("CatalogEntry")
            .field("kind", &self.kind)
            .field("spec", &self.spec)
            .field("extended_fermi_chart", &self.extended_fermi_chart)
            .field("time_rescale", &self.time_rescale)
            .finish()
    }
}

/// Constant-density interior solution helpers, shared between construction
/// and the spherical profiles.
struct InteriorSolution {
    r0_sq: f64,
    /// `(3 - R0^2 L)/2 * sqrt(1 - R^2/R0^2)`
    c1: f64,
    /// `(1 - R0^2 L)/2`
    c2: f64,
}

impl InteriorSolution {
    fn new(mass: f64, radius: f64, lambda: f64) -> Result<Self> {
        if mass <= 0.0 || radius <= 0.0 {
            return Err(Error::InvalidParameter(
                "interior Schwarzschild requires M > 0 and R > 0".into(),
            ));
        }
        let r0_sq = 3.0 * radius.powi(3) / (6.0 * mass + lambda * radius.powi(3));
        if !(r0_sq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interior Schwarzschild R0^2 = {r0_sq} must be positive"
            )));
        }
        if radius * radius >= r0_sq {
            return Err(Error::InvalidParameter(format!(
                "fluid radius R = {radius} reaches R0 = {}; B(r) is not positive on [0, R]",
                r0_sq.sqrt()
            )));
        }
        let c1 = 0.5 * (3.0 - r0_sq * lambda) * (1.0 - radius * radius / r0_sq).sqrt();
        let c2 = 0.5 * (1.0 - r0_sq * lambda);
        Ok(Self { r0_sq, c1, c2 })
    }

    /// Signed square root of A(r).
    fn lapse(&self, r: f64) -> f64 {
        self.c1 - self.c2 * (1.0 - r * r / self.r0_sq).sqrt()
    }

    fn lapse_derivative(&self, r: f64) -> f64 {
        self.c2 * r / (self.r0_sq * (1.0 - r * r / self.r0_sq).sqrt())
    }
}

/// Builds the requested catalog spacetime, enforcing the per-kind parameter
/// constraints. For the interior Schwarzschild solution the lapse is scanned
/// over the whole fluid and construction fails if it is not strictly
/// positive anywhere on `[0, R]`.
pub fn make_catalog_entry(kind: SpacetimeKind) -> Result<CatalogEntry> {
    match kind {
        SpacetimeKind::Minkowski => {
            let one: RadialFn = Arc::new(|_| 1.0);
            let zero: RadialFn = Arc::new(|_| 0.0);
            Ok(CatalogEntry {
                kind,
                spec: MetricSpec::minkowski(),
                extended_fermi_chart: false,
                time_rescale: 1.0,
                radial: RadialProfiles {
                    g_tt: Arc::new(|_| -1.0),
                    dg_tt: zero.clone(),
                    g_rr: one,
                    dg_rr: zero,
                },
            })
        }
        SpacetimeKind::DeSitter { lambda } => {
            if !(lambda > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "de Sitter requires lambda > 0, got {lambda}"
                )));
            }
            Ok(CatalogEntry {
                kind,
                spec: constant_curvature_spec(lambda),
                extended_fermi_chart: false,
                time_rescale: 1.0,
                radial: constant_curvature_profiles(lambda),
            })
        }
        SpacetimeKind::AntiDeSitter { lambda } => {
            if !(lambda < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "anti-de Sitter requires lambda < 0, got {lambda}"
                )));
            }
            Ok(CatalogEntry {
                kind,
                spec: constant_curvature_spec(lambda),
                extended_fermi_chart: false,
                time_rescale: 1.0,
                radial: constant_curvature_profiles(lambda),
            })
        }
        SpacetimeKind::EinsteinStatic { radius } => {
            if !(radius > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Einstein static universe requires R > 0, got {radius}"
                )));
            }
            let k = 1.0 / (radius * radius);
            let spec = MetricSpec::new(
                Arc::new(|_, _, _| 0.0),
                Arc::new(|_, _, _| [0.0; 3]),
                k,
            )
            // f vanishes identically, so the Fermi chart extends to the
            // antipode at rho = pi R.
            .with_fermi_domain(PI * radius, false);
            let zero: RadialFn = Arc::new(|_| 0.0);
            Ok(CatalogEntry {
                kind,
                spec,
                extended_fermi_chart: true,
                time_rescale: 1.0,
                radial: RadialProfiles {
                    g_tt: Arc::new(|_| -1.0),
                    dg_tt: zero,
                    g_rr: Arc::new(move |r| 1.0 / (1.0 - k * r * r)),
                    dg_rr: Arc::new(move |r| {
                        let w = 1.0 - k * r * r;
                        2.0 * k * r / (w * w)
                    }),
                },
            })
        }
        SpacetimeKind::InteriorSchwarzschild {
            mass,
            radius,
            lambda,
        } => {
            let sol = InteriorSolution::new(mass, radius, lambda)?;
            // A(r) = lapse(r)^2 must stay away from zero on the fluid:
            // scan the signed lapse.
            let n = 1024;
            for i in 0..=n {
                let r = radius * i as f64 / n as f64;
                if sol.lapse(r) <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "A(r) vanishes on the fluid (lapse {} at r = {r}); \
                         the metric is not well-defined for M = {mass}, R = {radius}, \
                         lambda = {lambda}",
                        sol.lapse(r)
                    )));
                }
            }
            let k = 1.0 / sol.r0_sq;
            let r0_sq = sol.r0_sq;
            let lapse0 = sol.lapse(0.0);
            let a0 = lapse0 * lapse0;
            let (c1, c2) = (sol.c1, sol.c2);
            let lapse = move |r: f64| c1 - c2 * (1.0 - r * r / r0_sq).sqrt();
            let f = move |x: f64, y: f64, z: f64| {
                let l = lapse((x * x + y * y + z * z).sqrt());
                1.0 - l * l / a0
            };
            // grad f = -(A'(r)/A(0)) * x_i/r; the 1/r cancels exactly:
            // A'(r)/r = 2 lapse(r) c2 / (R0^2 sqrt(1 - r^2/R0^2)).
            let grad_f = move |x: f64, y: f64, z: f64| {
                let r = (x * x + y * y + z * z).sqrt();
                let da_over_r =
                    2.0 * lapse(r) * c2 / (r0_sq * (1.0 - r * r / r0_sq).sqrt());
                let g = -da_over_r / a0;
                [g * x, g * y, g * z]
            };
            let fermi_rho_sup = r0_sq.sqrt() * (radius / r0_sq.sqrt()).asin();
            let spec = MetricSpec::new(Arc::new(f), Arc::new(grad_f), k)
                .with_spatial_domain(radius, true)
                .with_fermi_domain(fermi_rho_sup, true);
            Ok(CatalogEntry {
                kind,
                spec,
                extended_fermi_chart: false,
                time_rescale: lapse0,
                radial: RadialProfiles {
                    g_tt: Arc::new(move |r| {
                        let l = sol.lapse(r);
                        -l * l
                    }),
                    dg_tt: {
                        let sol = InteriorSolution::new(mass, radius, lambda)?;
                        Arc::new(move |r| -2.0 * sol.lapse(r) * sol.lapse_derivative(r))
                    },
                    g_rr: Arc::new(move |r| 1.0 / (1.0 - k * r * r)),
                    dg_rr: Arc::new(move |r| {
                        let w = 1.0 - k * r * r;
                        2.0 * k * r / (w * w)
                    }),
                },
            })
        }
    }
}

fn constant_curvature_spec(lambda: f64) -> MetricSpec {
    let k = lambda / 3.0;
    MetricSpec::new(
        Arc::new(move |x, y, z| k * (x * x + y * y + z * z)),
        Arc::new(move |x, y, z| [2.0 * k * x, 2.0 * k * y, 2.0 * k * z]),
        k,
    )
}

fn constant_curvature_profiles(lambda: f64) -> RadialProfiles {
    let k = lambda / 3.0;
    RadialProfiles {
        g_tt: Arc::new(move |r| -(1.0 - k * r * r)),
        dg_tt: Arc::new(move |r| 2.0 * k * r),
        g_rr: Arc::new(move |r| 1.0 / (1.0 - k * r * r)),
        dg_rr: Arc::new(move |r| {
            let w = 1.0 - k * r * r;
            2.0 * k * r / (w * w)
        }),
    }
}

impl CatalogEntry {
    pub fn kind(&self) -> SpacetimeKind {
        self.kind
    }

    pub fn spec(&self) -> &MetricSpec {
        &self.spec
    }

    pub fn extended_fermi_chart(&self) -> bool {
        self.extended_fermi_chart
    }

    /// Factor between the Cartesian-chart time `t` and the spherical-chart
    /// time: `t = time_rescale * t_spherical`.
    pub fn time_rescale(&self) -> f64 {
        self.time_rescale
    }

    pub(crate) fn radial(&self) -> &RadialProfiles {
        &self.radial
    }

    /// Maps a `StaticSpherical` point to the `CartesianStatic` chart,
    /// including the time rescaling.
    pub fn spherical_to_cartesian_point(&self, p: &SpacetimePoint) -> Result<SpacetimePoint> {
        p.expect_chart(Chart::StaticSpherical)?;
        let [t, r, theta, phi] = p.coords;
        Ok(SpacetimePoint::cartesian_static(
            self.time_rescale * t,
            r * theta.sin() * phi.cos(),
            r * theta.sin() * phi.sin(),
            r * theta.cos(),
        ))
    }
}

/// The metric of the family evaluated in the `CartesianStatic` chart.
///
/// The anisotropic `dr^2` term is expanded into Cartesian components via
/// `dr = (x dx + y dy + z dz)/r`, giving
/// `g_ij = delta_ij + k x_i x_j / (1 - k r^2)`; the metric reduces to
/// `diag(-(1 - f), 1, 1, 1)` on the worldline.
pub fn metric_at(spec: &MetricSpec, p: &SpacetimePoint) -> Result<Metric4> {
    p.expect_chart(Chart::CartesianStatic)?;
    let [x, y, z] = p.spatial();
    metric_components(spec, [x, y, z])
}

/// Chart-free core of [`metric_at`], shared with the geodesic engine.
pub(crate) fn metric_components(spec: &MetricSpec, xyz: [f64; 3]) -> Result<Metric4> {
    let [x, y, z] = xyz;
    let r = x.hypot(y).hypot(z);
    if !spec.spatial_domain_contains(r) || 1.0 - spec.k * r * r <= 0.0 {
        return Err(Error::OutsideChart(format!(
            "r = {r} outside the static chart (1 - k r^2 must stay positive)"
        )));
    }
    let c = spec.dr2_coefficient(r);
    let xs = [x, y, z];
    let mut rows = [[0.0; 4]; 4];
    rows[0][0] = -(1.0 - spec.f_at(x, y, z));
    for i in 0..3 {
        for j in 0..3 {
            rows[i + 1][j + 1] = if i == j { 1.0 } else { 0.0 } + c * xs[i] * xs[j];
        }
    }
    Ok(Metric4::from_rows(rows))
}

/// The same spacetime in its diagonal `StaticSpherical` form, used as the
/// independent representation for cross-checks. For interior Schwarzschild
/// the time coordinate here is the original (unrescaled) one.
pub fn static_spherical_metric_at(entry: &CatalogEntry, p: &SpacetimePoint) -> Result<Metric4> {
    p.expect_chart(Chart::StaticSpherical)?;
    let [_t, r, theta, phi] = p.coords;
    if !entry.spec.spatial_domain_contains(r) {
        return Err(Error::OutsideChart(format!(
            "r = {r} outside the static chart"
        )));
    }
    check_angles(theta, phi)?;
    let rad = &entry.radial;
    Ok(Metric4::diagonal([
        (rad.g_tt)(r),
        (rad.g_rr)(r),
        r * r,
        r * r * theta.sin().powi(2),
    ]))
}

/// Orthonormal frame along the central worldline, expressed in the
/// `CartesianStatic` chart. For this metric family the coordinate-aligned
/// frame is parallel along the worldline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tetrad {
    /// Vectors e_0..e_3, each with components indexed by coordinate.
    pub vectors: [[f64; 4]; 4],
}

impl Tetrad {
    /// The frame `e_alpha = d/dx^alpha` anchored on the worldline.
    pub fn coordinate_aligned() -> Self {
        let mut vectors = [[0.0; 4]; 4];
        for (alpha, v) in vectors.iter_mut().enumerate() {
            v[alpha] = 1.0;
        }
        Self { vectors }
    }

    /// Largest deviation of `g(e_alpha, e_beta)` from the Minkowski values.
    pub fn orthonormality_defect(&self, g: &Metric4) -> f64 {
        let eta = Metric4::minkowski();
        let mut worst: f64 = 0.0;
        for alpha in 0..4 {
            for beta in 0..4 {
                let mut inner = 0.0;
                for mu in 0..4 {
                    for nu in 0..4 {
                        inner +=
                            g.component(mu, nu) * self.vectors[alpha][mu] * self.vectors[beta][nu];
                    }
                }
                worst = worst.max((inner - eta.component(alpha, beta)).abs());
            }
        }
        worst
    }
}

/// JSON description of a catalog spacetime:
/// `{"kind": "...", "lambda": ..., "R": ..., "M": ...}`. Unknown keys are
/// rejected, as are parameters that do not belong to the chosen kind.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeConfig {
    pub kind: ConfigKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigKind {
    Minkowski,
    DeSitter,
    AntiDeSitter,
    EinsteinStatic,
    InteriorSchwarzschild,
}

impl SpacetimeConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("spacetime config: {e}")))
    }

    /// Resolves the config into a `SpacetimeKind`, rejecting missing or
    /// extraneous parameters.
    pub fn to_kind(&self) -> Result<SpacetimeKind> {
        let require = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| {
                Error::Config(format!("{:?} requires the \"{name}\" parameter", self.kind))
            })
        };
        let forbid = |v: Option<f64>, name: &str| {
            if v.is_some() {
                Err(Error::Config(format!(
                    "\"{name}\" is not a parameter of {:?}",
                    self.kind
                )))
            } else {
                Ok(())
            }
        };
        match self.kind {
            ConfigKind::Minkowski => {
                forbid(self.lambda, "lambda")?;
                forbid(self.radius, "R")?;
                forbid(self.mass, "M")?;
                Ok(SpacetimeKind::Minkowski)
            }
            ConfigKind::DeSitter => {
                forbid(self.radius, "R")?;
                forbid(self.mass, "M")?;
                Ok(SpacetimeKind::DeSitter {
                    lambda: require(self.lambda, "lambda")?,
                })
            }
            ConfigKind::AntiDeSitter => {
                forbid(self.radius, "R")?;
                forbid(self.mass, "M")?;
                Ok(SpacetimeKind::AntiDeSitter {
                    lambda: require(self.lambda, "lambda")?,
                })
            }
            ConfigKind::EinsteinStatic => {
                forbid(self.lambda, "lambda")?;
                forbid(self.mass, "M")?;
                Ok(SpacetimeKind::EinsteinStatic {
                    radius: require(self.radius, "R")?,
                })
            }
            ConfigKind::InteriorSchwarzschild => Ok(SpacetimeKind::InteriorSchwarzschild {
                mass: require(self.mass, "M")?,
                radius: require(self.radius, "R")?,
                // The cosmological constant defaults to zero for the fluid.
                lambda: self.lambda.unwrap_or(0.0),
            }),
        }
    }

    pub fn into_entry(&self) -> Result<CatalogEntry> {
        make_catalog_entry(self.to_kind()?)
    }
}
