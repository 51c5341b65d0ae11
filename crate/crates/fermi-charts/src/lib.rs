//! Exact Fermi normal coordinate charts for a family of static, spherically
//! symmetric spacetimes (de Sitter, anti-de Sitter, the Einstein static
//! universe, and the interior constant-density Schwarzschild solution with
//! cosmological constant), together with an independent numerical oracle
//! that verifies every closed form.
//!
//! The library is organized around two routes to the same geometry:
//!
//! * **Closed forms** ([`chart`], [`jacobi`]): the coordinate
//!   transformations to and from Fermi coordinates, the exact Fermi metrics
//!   in Cartesian and polar form, the Gaussian curvature of the (t, rho)
//!   slice, and the Jacobi separation of the coordinate spacelike geodesics.
//! * **Numerics** ([`geodesic`]): connection coefficients (exact or finite
//!   difference), adaptive geodesic integration, the exponential map, and
//!   parallel-transport checks, none of which reuse the closed forms.
//!
//! Agreement between the two routes, at tight tolerances, is what
//! `fermi-charts validate` and this crate's acceptance suite certify.
//!
//! ```
//! use fermi_charts::catalog::{make_catalog_entry, SpacetimeKind};
//! use fermi_charts::chart::{fermi_to_cartesian, fermi_metric_at};
//! use fermi_charts::point::SpacetimePoint;
//!
//! let ds = make_catalog_entry(SpacetimeKind::DeSitter { lambda: 3.0 }).unwrap();
//! let fp = SpacetimePoint::fermi_cartesian(0.0, 0.9, 0.0, 0.0);
//! let p = fermi_to_cartesian(ds.spec(), &fp).unwrap();
//! assert!((p.coords[1] - 0.9f64.sin()).abs() < 1e-15);
//! let g = fermi_metric_at(ds.spec(), &fp).unwrap();
//! assert!((g[(0, 0)] + 0.9f64.cos().powi(2)).abs() < 1e-15);
//! ```

// Guards written as `!(x > 0.0)` are deliberate: they reject NaN along with
// the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod chart;
pub mod cli;
pub mod config;
pub mod error;
pub mod geodesic;
pub mod jacobi;
pub mod metric;
mod ode;
pub mod output;
pub mod point;
pub mod validate;

pub use catalog::{make_catalog_entry, CatalogEntry, MetricSpec, SpacetimeConfig, SpacetimeKind};
pub use error::{Error, Result};
pub use geodesic::IntegratorConfig;
pub use metric::Metric4;
pub use point::{Chart, SpacetimePoint};
