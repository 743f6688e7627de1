//! Fixtures and independent oracles shared by the integration tests and
//! the acceptance suite.
#![allow(dead_code)]

pub mod tokens;
pub mod programs;
pub mod precedence;
pub mod gating;
pub mod inference;
pub mod minicorpus;
