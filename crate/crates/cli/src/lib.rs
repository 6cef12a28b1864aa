//! Verification suites and the JSON report model behind the `qrea` binary.

pub mod anchors;
pub mod report;
pub mod suites;
