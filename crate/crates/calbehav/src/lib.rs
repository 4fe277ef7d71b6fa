//! Mining personalized, non-redundant call-handling rules from a person's
//! calendar and phone call log.
//!
//! The pipeline joins calendar occurrences with call records by temporal
//! containment, ranks the resulting context attributes by information gain,
//! grows an association generation tree whose nodes carry exact behavior
//! distributions, marks branches that repeat an ancestor's verdict without
//! improving on it, and reads rules off the surviving nodes. Two static
//! calendar baselines and a cross-validated evaluation harness sit
//! alongside the miner, plus a seeded generator for synthetic user bundles.

pub mod baselines;
pub mod calendar;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod mapping;
pub mod miner;
pub mod phonelog;
pub mod ratio;
pub mod rng;
pub mod synth;

pub use error::{Diagnostic, Error, Severity};
pub use ratio::Ratio;
