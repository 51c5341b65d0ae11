//! Fuzzes the spacetime config parser and the catalog construction behind
//! it: arbitrary bytes must never panic, and an accepted config must yield
//! an entry whose metric is evaluable on the worldline.

#![no_main]

use libfuzzer_sys::fuzz_target;

use fermi_charts::catalog::{metric_at, SpacetimeConfig};
use fermi_charts::point::SpacetimePoint;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(config) = SpacetimeConfig::from_json_str(text) else {
        return;
    };
    if let Ok(entry) = config.into_entry() {
        // Construction enforces the domain invariants, so the origin metric
        // must exist and equal Minkowski.
        let origin = SpacetimePoint::cartesian_static(0.0, 0.0, 0.0, 0.0);
        let g = metric_at(entry.spec(), &origin).expect("origin is always in the chart");
        assert_eq!(g.component(0, 0), -1.0);
    }
});
