//! Shared fixtures for the benchmarks.

use cvqt_core::resource::ResourceSpec;

pub fn sym_spec(n: u32, r: f64) -> ResourceSpec {
    ResourceSpec::photon_subtracted(n, n, 0.9, 0.9, r, 0.5).expect("valid bench spec")
}
