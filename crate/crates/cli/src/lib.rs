//! Scenario-driven batch verification: a catalog of (group, graph) and
//! code-builder instances, named check suites that evaluate the structural
//! theorems on them, and machine-readable reports.

pub mod catalog;
pub mod checks;
pub mod config;
pub mod instances;
pub mod report;
pub mod runner;

pub use report::{CheckOutcome, Report, Status};
