//! Bounded forward explicit-state exploration, used as an independent
//! correctness oracle and as a witness replayer.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

/// Forward semantics of a model, as seen by the explorer.
pub trait ForwardModel {
    /// A concrete configuration.
    type State: Clone + Ord;
    /// What coverage is checked against.
    type Target;

    /// All one-step successors with the name of the applied rule, in a
    /// deterministic order.
    fn successors(&self, state: &Self::State) -> Vec<(String, Self::State)>;

    /// The canonical form used to identify states up to isomorphism.
    fn canonical(&self, state: &Self::State) -> Self::State;

    /// Whether the state covers the target.
    fn covers(&self, state: &Self::State, target: &Self::Target) -> bool;
}

#[derive(Clone, Debug)]
pub struct ExploreResult<S> {
    /// Canonical forms of every configuration reached.
    pub visited: BTreeSet<S>,
    /// A covering configuration and the firing sequence that reaches
    /// it, if one was found within the depth bound.
    pub covering_witness: Option<(S, Vec<String>)>,
    /// True iff no configuration at the horizon remained unexpanded,
    /// i.e. the search proved there is nothing beyond the bound.
    pub frontier_exhausted: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("no applicable instance for step {index} of the firing sequence")]
    Stuck { index: usize },
}

/// Breadth-first exploration of canonical configurations up to `depth`,
/// stopping early with a shortest witness when the target is covered.
pub fn explore<M: ForwardModel>(
    model: &M,
    initial: &M::State,
    target: &M::Target,
    depth: usize,
) -> ExploreResult<M::State> {
    let mut visited: BTreeSet<M::State> = BTreeSet::new();
    visited.insert(model.canonical(initial));
    if model.covers(initial, target) {
        return ExploreResult {
            visited,
            covering_witness: Some((initial.clone(), Vec::new())),
            frontier_exhausted: false,
        };
    }
    let mut queue: VecDeque<(M::State, Vec<String>, usize)> = VecDeque::new();
    queue.push_back((initial.clone(), Vec::new(), 0));
    let mut cut_off = false;
    while let Some((state, path, d)) = queue.pop_front() {
        let succs = model.successors(&state);
        if d == depth {
            // a horizon node counts as unexpanded only if it still had
            // somewhere new to go
            if succs
                .iter()
                .any(|(_, t)| !visited.contains(&model.canonical(t)))
            {
                cut_off = true;
            }
            continue;
        }
        for (name, succ) in succs {
            if !visited.insert(model.canonical(&succ)) {
                continue;
            }
            let mut next_path = path.clone();
            next_path.push(name);
            if model.covers(&succ, target) {
                return ExploreResult {
                    visited,
                    covering_witness: Some((succ, next_path)),
                    frontier_exhausted: false,
                };
            }
            queue.push_back((succ, next_path, d + 1));
        }
    }
    ExploreResult {
        visited,
        covering_witness: None,
        frontier_exhausted: !cut_off,
    }
}

/// Applies a firing sequence step by step. When a rule admits several
/// instances (fresh identifiers, several matchings), the replayed
/// instance is chosen to preserve coverage of `target` when one exists;
/// without a target the first full application wins.
pub fn replay<M: ForwardModel>(
    model: &M,
    initial: &M::State,
    sequence: &[String],
    target: Option<&M::Target>,
) -> Result<M::State, ReplayError> {
    let mut first_full: Option<M::State> = None;
    let mut deepest = 0usize;
    if let Some(covering) = replay_dfs(
        model,
        initial,
        sequence,
        0,
        target,
        &mut first_full,
        &mut deepest,
    ) {
        return Ok(covering);
    }
    first_full.ok_or(ReplayError::Stuck { index: deepest })
}

fn replay_dfs<M: ForwardModel>(
    model: &M,
    state: &M::State,
    sequence: &[String],
    i: usize,
    target: Option<&M::Target>,
    first_full: &mut Option<M::State>,
    deepest: &mut usize,
) -> Option<M::State> {
    if i == sequence.len() {
        match target {
            Some(t) if model.covers(state, t) => return Some(state.clone()),
            Some(_) => {
                if first_full.is_none() {
                    *first_full = Some(state.clone());
                }
                return None;
            }
            None => return Some(state.clone()),
        }
    }
    let mut any = false;
    for (name, succ) in model.successors(state) {
        if name != sequence[i] {
            continue;
        }
        any = true;
        if let Some(hit) = replay_dfs(model, &succ, sequence, i + 1, target, first_full, deepest) {
            return Some(hit);
        }
    }
    if !any {
        *deepest = (*deepest).max(i);
    }
    None
}
