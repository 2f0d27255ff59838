//! Randomized 4/3-approximate Eulerian tours for half-integral cycle-cut
//! instances of the symmetric TSP.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`instance`] loads (or generates) a half-integral Subtour-LP point and
//!    builds its 4-regular support [`multigraph::Multigraph`].
//! 2. [`cuts`] enumerates the tight sets and extracts the laminar hierarchy of
//!    critical cuts, classifying every non-singleton node as a cycle or a
//!    degree cut.
//! 3. [`embedding`] lays every cycle cut out as a chain of children with
//!    top/bottom labels and the four boundary roles `UL`, `DL`, `UR`, `DR`.
//! 4. [`chain`] holds the exact pattern-state algebra: the two transition
//!    maps, the feasible region and the parameter choice that keeps it
//!    invariant.
//! 5. [`sampler`] propagates distributions top-down and samples connected
//!    Eulerian multigraphs whose edges are used 2/3 of the time in
//!    expectation.

pub mod chain;
pub mod cli;
pub mod cuts;
pub mod embedding;
pub mod error;
pub mod instance;
pub mod multigraph;
pub mod rational;
pub mod sampler;

pub use error::{Error, Result};
pub use rational::Rational;

/// Version string embedded in every JSON report.
pub const REPORT_SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    REPORT_SCHEMA_VERSION
}

/// Warning for comparing against a stored report: `None` when its
/// `schema_version` matches this build, a message otherwise.
pub fn schema_warning(report: &serde_json::Value) -> Option<String> {
    match report.get("schema_version").and_then(|v| v.as_str()) {
        Some(REPORT_SCHEMA_VERSION) => None,
        Some(other) => Some(format!(
            "report schema {other} differs from {REPORT_SCHEMA_VERSION}; fields may not compare"
        )),
        None => Some("report has no schema_version".to_string()),
    }
}
