//! Petri nets whose transitions emit events into a log: forward firing
//! and symbolic predecessor computation on (marking, history) pairs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::engine::{self, RenderElement, Verdict};
use crate::history::{Event, History, LogMode};
use crate::wqo::{Multiset, Subsumption};

pub type Marking = Multiset<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub pre: Marking,
    pub post: Marking,
    pub event: Event,
}

/// A Petri net with history: transitions consume `pre`, produce `post`
/// and append their event to the log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNetH {
    places: BTreeSet<String>,
    events: BTreeSet<String>,
    transitions: Vec<Transition>,
    initial: Marking,
    log_mode: LogMode,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PetriError {
    #[error("transition {transition} mentions undeclared place {place}")]
    UnknownPlace { transition: String, place: String },
    #[error("transition {transition} emits undeclared event {event}")]
    UnknownEvent { transition: String, event: String },
    #[error("duplicate transition name {name}")]
    DuplicateTransition { name: String },
    #[error("initial marking mentions undeclared place {place}")]
    UnknownInitialPlace { place: String },
    #[error("no transition named {name}")]
    UnknownTransition { name: String },
    #[error("transition {name} is not enabled")]
    NotEnabled { name: String },
    #[error("history mode {found} does not match the net's log mode {expected}")]
    ModeMismatch { expected: LogMode, found: LogMode },
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
}

impl PetriNetH {
    pub fn new(
        places: BTreeSet<String>,
        events: BTreeSet<String>,
        transitions: Vec<Transition>,
        initial: Marking,
        log_mode: LogMode,
    ) -> Result<Self, PetriError> {
        let mut names = BTreeSet::new();
        for t in &transitions {
            if !names.insert(t.name.clone()) {
                return Err(PetriError::DuplicateTransition {
                    name: t.name.clone(),
                });
            }
            for (p, _) in t.pre.counts().chain(t.post.counts()) {
                if !places.contains(p) {
                    return Err(PetriError::UnknownPlace {
                        transition: t.name.clone(),
                        place: p.clone(),
                    });
                }
            }
            if !events.contains(&t.event.0) {
                return Err(PetriError::UnknownEvent {
                    transition: t.name.clone(),
                    event: t.event.0.clone(),
                });
            }
        }
        for (p, _) in initial.counts() {
            if !places.contains(p) {
                return Err(PetriError::UnknownInitialPlace { place: p.clone() });
            }
        }
        Ok(PetriNetH {
            places,
            events,
            transitions,
            initial,
            log_mode,
        })
    }

    pub fn places(&self) -> &BTreeSet<String> {
        &self.places
    }

    pub fn events(&self) -> &BTreeSet<String> {
        &self.events
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn initial_config(&self) -> HConfig {
        HConfig {
            marking: self.initial.clone(),
            history: History::empty(self.log_mode),
        }
    }

    pub fn log_mode(&self) -> LogMode {
        self.log_mode
    }

    pub fn transition(&self, name: &str) -> Result<&Transition, PetriError> {
        self.transitions
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| PetriError::UnknownTransition {
                name: name.to_string(),
            })
    }
}

/// A marking together with the log accumulated so far.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HConfig {
    pub marking: Marking,
    pub history: History,
}

impl HConfig {
    pub fn new(marking: Marking, history: History) -> Self {
        HConfig { marking, history }
    }
}

impl Subsumption for HConfig {
    fn subsumes(&self, other: &Self) -> bool {
        self.marking.contained_in(&other.marking) && self.history.leq(&other.history)
    }
}

impl RenderElement for HConfig {
    fn atoms_text(&self) -> String {
        let places: Vec<String> = self.marking.occurrences().cloned().collect();
        places.join(",")
    }
    fn constraint_text(&self) -> String {
        self.history.to_string()
    }
}

impl std::fmt::Display for HConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "([{}], {{{}}})",
            self.atoms_text(),
            self.constraint_text()
        )
    }
}

/// Fires transition `name`: the marking update `(M ⊖ Pre) ⊕ Post` and
/// the log extension with the transition's event.
pub fn fire(net: &PetriNetH, config: &HConfig, name: &str) -> Result<HConfig, PetriError> {
    let t = net.transition(name)?;
    if config.history.mode() != net.log_mode {
        return Err(PetriError::ModeMismatch {
            expected: net.log_mode,
            found: config.history.mode(),
        });
    }
    if !t.pre.contained_in(&config.marking) {
        return Err(PetriError::NotEnabled {
            name: name.to_string(),
        });
    }
    Ok(HConfig {
        marking: config.marking.saturating_sub(&t.pre).union(&t.post),
        history: config.history.extend(&t.event),
    })
}

/// Symbolic one-step predecessors of the upward closure of `target`
/// under transition `name`: the marking `Pre ⊕ (M ⊖ Post)` (truncated
/// subtraction) paired with each log predecessor.
pub fn pre_transition(
    net: &PetriNetH,
    target: &HConfig,
    name: &str,
) -> Result<Vec<HConfig>, PetriError> {
    let t = net.transition(name)?;
    let marking = t.pre.union(&target.marking.saturating_sub(&t.post));
    Ok(target
        .history
        .pre(&t.event)
        .elements()
        .iter()
        .map(|h| HConfig {
            marking: marking.clone(),
            history: h.clone(),
        })
        .collect())
}

/// Decides history coverability by backward saturation from the target,
/// with membership tested against the net's initial marking and the
/// empty log.
pub fn hcov_petri(
    net: &PetriNetH,
    target: &HConfig,
    max_iterations: Option<u32>,
) -> Result<Verdict<HConfig>, PetriError> {
    if target.history.mode() != net.log_mode {
        return Err(PetriError::ModeMismatch {
            expected: net.log_mode,
            found: target.history.mode(),
        });
    }
    let initial = net.initial_config();
    let verdict = engine::saturate(
        vec![target.clone()],
        |c| {
            net.transitions
                .iter()
                .flat_map(|t| {
                    pre_transition(net, c, &t.name)
                        .expect("transitions of the net are declared")
                        .into_iter()
                        .map(move |p| (t.name.clone(), p))
                })
                .collect()
        },
        |a: &HConfig, b: &HConfig| a.subsumes(b),
        |e| e.subsumes(&initial),
        max_iterations,
    )?;
    Ok(verdict)
}

impl crate::oracle::ForwardModel for PetriNetH {
    type State = HConfig;
    type Target = HConfig;

    fn successors(&self, state: &HConfig) -> Vec<(String, HConfig)> {
        self.transitions
            .iter()
            .filter_map(|t| {
                fire(self, state, &t.name)
                    .ok()
                    .map(|succ| (t.name.clone(), succ))
            })
            .collect()
    }

    fn canonical(&self, state: &HConfig) -> HConfig {
        state.clone()
    }

    fn covers(&self, state: &HConfig, target: &HConfig) -> bool {
        target.subsumes(state)
    }
}
