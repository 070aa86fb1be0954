//! Experiment harness on top of the `qbnn` simulator: seeded instance
//! generators, the five canned experiments, and JSON/CSV result emission.

pub mod experiments;
pub mod gen;
pub mod report;
