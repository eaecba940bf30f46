//! Shared workloads for the criterion benches.

use absix_core::atlas::{builtin_from_spec, curve_product};
use absix_core::StratumAtlas;

/// Corpus atlases plus a few larger synthetic ones, by label.
pub fn atlas_workloads() -> Vec<(String, StratumAtlas)> {
    let mut out: Vec<(String, StratumAtlas)> = ["a1", "an:n=4", "surface_resolution:r=4", "gm_times_a1"]
        .iter()
        .map(|s| (s.to_string(), builtin_from_spec(s).expect("corpus entry")))
        .collect();
    for factors in [vec![(1, 3)], vec![(1, 2), (0, 2)], vec![(2, 2), (1, 2)]] {
        let label = factors.iter().map(|(g, k)| format!("g{g}k{k}")).collect::<Vec<_>>().join("x");
        out.push((format!("curves:{label}"), curve_product(&factors)));
    }
    out
}
