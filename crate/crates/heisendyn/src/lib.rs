//! IO companion to `heisencore`: deterministic JSON/CSV reports, the
//! command-line interface, and the parallel sweep helpers.

pub mod json;
pub mod parallel;
pub mod report;
pub mod run;
