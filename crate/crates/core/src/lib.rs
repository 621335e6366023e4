//! Stable configurations of equal discs: construction, jamming verification
//! and the hard-disc Metropolis chain.

pub mod config;
pub mod construction;
pub mod error;
pub mod geom;
pub mod io;
pub mod metropolis;
pub mod verifier;

pub use config::{Configuration, Container, Side, Wall};
pub use construction::{AssemblyMetrics, BridgeChain, CurveFamily, Layout, Piece, Region, Role};
pub use error::{Error, Result};
pub use geom::{Point2, Tolerances};
pub use metropolis::{ChainParams, ChainStats};
pub use verifier::{verify_stable, ContactGraph, JammingReport, MovableDisc, Verdict};
