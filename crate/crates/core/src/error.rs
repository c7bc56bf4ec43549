use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Every message names the module and operation
/// that failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph::{op}: unstable pair (g, n) = ({g}, {n})")]
    Unstable { op: &'static str, g: u32, n: usize },

    #[error("graph::{op}: invalid stable graph: {reason}")]
    InvalidGraph { op: &'static str, reason: String },

    #[error("{module}::{op}: invalid input: {reason}")]
    InvalidInput {
        module: &'static str,
        op: &'static str,
        reason: String,
    },

    #[error("twist::{op}: malformed twist: {reason}")]
    MalformedTwist { op: &'static str, reason: String },

    #[error("twist::component_digraph: vanishing condition violated on edge {edge}")]
    Vanishing { edge: usize },

    #[error("strata::{op}: ambient mismatch: ({g1}, {n1}) vs ({g2}, {n2})")]
    AmbientMismatch {
        op: &'static str,
        g1: u32,
        n1: usize,
        g2: u32,
        n2: usize,
    },

    #[error("{module}::{op}: degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch {
        module: &'static str,
        op: &'static str,
        expected: usize,
        found: String,
    },

    #[error("pixton::pixton_class: interpolation did not stabilize with {samples} samples (r = {first_r}..)")]
    Interpolation { samples: usize, first_r: u64 },

    #[error("hclass::{op}: {reason}")]
    Recursion { op: &'static str, reason: String },

    #[error("format::{op}: {reason}")]
    Format { op: &'static str, reason: String },

    #[error("cache::{op}: {source}")]
    Io {
        op: &'static str,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(module: &'static str, op: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            module,
            op,
            reason: reason.into(),
        }
    }
}
