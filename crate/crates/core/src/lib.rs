//! Core library of the `hcov` toolkit: history coverability for
//! well-structured transition systems.
//!
//! The building blocks are quasi-order combinators and finite bases of
//! upward-closed sets ([`wqo`]), event logs ([`history`]), two model
//! frontends (Petri nets with history in [`petri`], monadic multiset
//! rewriting over ordered identifiers in [`msr`]), a generic backward
//! saturation engine with provenance and trace reconstruction
//! ([`engine`]), and a bounded forward explorer used as an independent
//! oracle ([`oracle`]).

pub mod engine;
pub mod history;
pub mod msr;
pub mod oracle;
pub mod petri;
pub mod wqo;
