//! Monadic multiset rewriting over ordered identifiers: order
//! constraints, constrained configurations as symbolic upward-closed
//! sets, subsumption, symbolic rule predecessors and ground stepping.

pub mod config;
pub mod constraint;
pub mod monadize;
pub mod rule;

pub use config::{
    canonicalize_ground, render_ground, Atom, ConstrainedConfig, GroundAtom, GroundConfig,
};
pub use constraint::{IdConstraint, VarId};
pub use monadize::{
    fold_ground, folded_name, folded_predicates, monadize, Enums, MonadizeError, PolyArg, PolyAtom,
    PolyGroundArg, PolyRule, PolySig, PolyType,
};
pub use rule::{pre_rule, step_forward, step_instances, MsrRule};

use thiserror::Error;

use crate::engine::{self, RenderElement, Verdict};
use crate::oracle::ForwardModel;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MsrError {
    #[error("rule {rule} is not monadic; saturation handles monadic rules only")]
    NonMonadicRule { rule: String },
    #[error("the target is not monadic; saturation handles monadic targets only")]
    NonMonadicTarget,
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
}

impl RenderElement for ConstrainedConfig {
    fn atoms_text(&self) -> String {
        ConstrainedConfig::atoms_text(self)
    }
    fn constraint_text(&self) -> String {
        ConstrainedConfig::constraint_text(self)
    }
}

/// A rule system driven by the forward oracle and the saturation
/// engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsrSystem {
    rules: Vec<MsrRule>,
}

impl MsrSystem {
    pub fn new(rules: Vec<MsrRule>) -> Self {
        MsrSystem { rules }
    }

    pub fn rules(&self) -> &[MsrRule] {
        &self.rules
    }

    pub fn is_monadic(&self) -> bool {
        self.rules.iter().all(|r| r.is_monadic())
    }
}

impl ForwardModel for MsrSystem {
    type State = GroundConfig;
    type Target = ConstrainedConfig;

    fn successors(&self, state: &GroundConfig) -> Vec<(String, GroundConfig)> {
        self.rules
            .iter()
            .flat_map(|r| {
                step_instances(state, r)
                    .into_iter()
                    .map(move |s| (r.name.clone(), s))
            })
            .collect()
    }

    fn canonical(&self, state: &GroundConfig) -> GroundConfig {
        canonicalize_ground(state)
    }

    fn covers(&self, state: &GroundConfig, target: &ConstrainedConfig) -> bool {
        target.covers_ground(state)
    }
}

/// Decides coverability of the target's upward closure by backward
/// saturation, with membership tested against the given concrete
/// initial configurations (coverable iff any of them is covered).
pub fn hcov_msr(
    system: &MsrSystem,
    target: &ConstrainedConfig,
    initials: &[GroundConfig],
    max_iterations: Option<u32>,
) -> Result<Verdict<ConstrainedConfig>, MsrError> {
    for r in &system.rules {
        if !r.is_monadic() {
            return Err(MsrError::NonMonadicRule {
                rule: r.name.clone(),
            });
        }
    }
    if !target.is_monadic() {
        return Err(MsrError::NonMonadicTarget);
    }
    let verdict = engine::saturate(
        vec![target.clone()],
        |cfg| {
            system
                .rules
                .iter()
                .flat_map(|r| {
                    pre_rule(cfg, r)
                        .into_iter()
                        .map(move |p| (r.name.clone(), p))
                })
                .collect()
        },
        |a: &ConstrainedConfig, b: &ConstrainedConfig| a.subsumes_config(b),
        |e| initials.iter().any(|n| e.covers_ground(n)),
        max_iterations,
    )?;
    Ok(verdict)
}
