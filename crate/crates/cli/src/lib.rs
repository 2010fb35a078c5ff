//! Model file parsing and command plumbing for the `hcov` binary.

pub mod commands;
pub mod model;
pub mod parser;
