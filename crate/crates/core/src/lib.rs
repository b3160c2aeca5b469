//! Shift design and personnel task scheduling.
//!
//! Builds the mixed-integer model of a rostering instance, validates
//! schedules against every rule, and constructs schedules with a greedy
//! warm start followed by local search.

pub mod cli;
pub mod domain;
pub mod error;
pub mod formulation;
pub mod generate;
pub mod heuristics;
pub mod io;
pub mod preprocess;
pub mod validator;

pub use error::{Error, Result};
