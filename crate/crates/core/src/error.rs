use std::path::PathBuf;

use crate::verifier::MovableDisc;

/// Errors produced by the construction, verification and simulation layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("inadmissible curve family: {0}")]
    InadmissibleCurve(String),

    #[error("epsilon tuning failed for N = {n}: {reason} (eps_hi = {eps_hi})")]
    TuningFailure { n: usize, eps_hi: f64, reason: String },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("assembly failed for N = {n} ({layout}): {detail}; {} movable disc(s){}", movable.len(), describe_movable(movable))]
    AssemblyFailure { n: usize, layout: String, movable: Vec<MovableDisc>, detail: String },

    #[error("discs {i} and {j} overlap by {depth:e}")]
    Overlap { i: usize, j: usize, depth: f64 },

    #[error("disc {i} leaves the container by {depth:e}")]
    OutOfBox { i: usize, depth: f64 },

    #[error("schema error in {path}: {reason}")]
    Schema { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, #[source] source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, Error>;

fn describe_movable(movable: &[MovableDisc]) -> String {
    let mut out = Vec::with_capacity(movable.len());
    for m in movable.iter().take(12) {
        out.push(match m.cone {
            Some((lo, hi)) => format!("#{} cone [{:.2}deg, {:.2}deg]", m.index, lo.to_degrees(), hi.to_degrees()),
            None => format!("#{} (no contacts)", m.index),
        });
    }
    if movable.len() > 12 {
        out.push(format!("... {} more", movable.len() - 12));
    }
    if out.is_empty() {
        String::new()
    } else {
        format!(": {}", out.join(", "))
    }
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
