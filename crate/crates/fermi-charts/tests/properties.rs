//! Property tests over the closed-form chart machinery.

use std::sync::Arc;

use proptest::prelude::*;

use fermi_charts::catalog::MetricSpec;
use fermi_charts::chart::{
    cartesian_to_fermi, fermi_metric_at, fermi_to_cartesian, r_of_rho, rho_of_r, scaled_profile,
};
use fermi_charts::point::SpacetimePoint;

fn bare_spec(k: f64) -> MetricSpec {
    MetricSpec::new(Arc::new(|_, _, _| 0.0), Arc::new(|_, _, _| [0.0; 3]), k)
}

/// A curvature constant bounded away from zero (the flat case is covered by
/// dedicated tests; near-zero k only stresses the series switchover, which
/// has its own coverage).
fn curvature() -> impl Strategy<Value = f64> {
    prop_oneof![0.05f64..2.0, -2.0f64..-0.05]
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter_map("nonzero direction", |(x, y, z)| {
            let n = (x * x + y * y + z * z).sqrt();
            if n < 1e-3 {
                None
            } else {
                Some([x / n, y / n, z / n])
            }
        })
}

proptest! {
    #[test]
    fn transform_round_trip(
        k in curvature(),
        dir in unit_vector(),
        frac in 0.0f64..0.95,
        t in -20.0f64..20.0,
    ) {
        let spec = bare_spec(k);
        let cap = spec.fermi_rho_sup().min(4.0);
        let rho = frac * cap;
        let fp = SpacetimePoint::fermi_cartesian(
            t, rho * dir[0], rho * dir[1], rho * dir[2],
        );
        let back = cartesian_to_fermi(&spec, &fermi_to_cartesian(&spec, &fp).unwrap()).unwrap();
        for mu in 0..4 {
            let scale = fp.coords[mu].abs().max(1.0);
            prop_assert!((back.coords[mu] - fp.coords[mu]).abs() / scale < 1e-12);
        }
    }

    #[test]
    fn radius_maps_are_mutually_inverse(k in curvature(), frac in 1e-6f64..0.999) {
        let rho = frac * if k > 0.0 {
            std::f64::consts::FRAC_PI_2 / k.sqrt()
        } else {
            4.0
        };
        let r = r_of_rho(k, rho).unwrap();
        let back = rho_of_r(k, r).unwrap();
        prop_assert!((back - rho).abs() / rho.max(1.0) < 1e-12);
    }

    #[test]
    fn radius_is_monotone_in_rho(k in curvature(), a in 1e-3f64..1.0, b in 1e-3f64..1.0) {
        let sup = if k > 0.0 {
            std::f64::consts::FRAC_PI_2 / k.sqrt()
        } else {
            4.0
        };
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        let r_lo = r_of_rho(k, lo * sup).unwrap();
        let r_hi = r_of_rho(k, hi * sup).unwrap();
        prop_assert!(r_lo < r_hi);
    }

    #[test]
    fn profile_is_bounded_and_ordered(k in curvature(), frac in 0.0f64..0.999) {
        let rho = frac * if k > 0.0 {
            std::f64::consts::FRAC_PI_2 / k.sqrt()
        } else {
            4.0
        };
        let p = scaled_profile(k, rho);
        if k > 0.0 {
            // sin(x)/x on (0, pi/2]: between 2/pi and 1.
            prop_assert!(p <= 1.0 && p > 2.0 / std::f64::consts::PI - 1e-15);
        } else {
            prop_assert!(p >= 1.0);
        }
    }

    #[test]
    fn fermi_metric_is_symmetric_lorentzian(
        k in curvature(),
        dir in unit_vector(),
        frac in 0.0f64..0.9,
    ) {
        let spec = bare_spec(k);
        let rho = frac * spec.fermi_rho_sup().min(4.0);
        let fp = SpacetimePoint::fermi_cartesian(
            0.0, rho * dir[0], rho * dir[1], rho * dir[2],
        );
        let g = fermi_metric_at(&spec, &fp).unwrap();
        prop_assert!(g.symmetry_defect() < 1e-15);
        prop_assert!(g.has_lorentzian_signature());
    }
}
