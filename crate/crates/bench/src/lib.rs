//! Shared fixtures for the benchmarks.

use jampack_core::construction::{assemble_square, five_disc_config};
use jampack_core::{Configuration, Layout};

pub const BRIDGE_NS: [usize; 4] = [4, 8, 16, 32];

/// Wall-bridge square for `n`; panics if the assembly fails.
pub fn square(n: usize) -> Configuration {
    assemble_square(n, Layout::WallBridges).expect("square assembles").0
}

/// Configurations worth timing the chain on, with a label.
pub fn chain_fixtures() -> Vec<(String, Configuration)> {
    let mut out = vec![("five-disc".to_string(), five_disc_config())];
    out.extend([8, 32].map(|n| (format!("square-N{n}"), square(n))));
    out
}
