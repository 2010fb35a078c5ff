//! Generic backward-reachability saturation with subsumption,
//! provenance facts, initial-membership verdicts and trace
//! reconstruction.
//!
//! The engine is parameterized by a symbolic element type through three
//! functions: a predecessor function, a subsumption test and an
//! initial-membership test. It computes the chain `I0 = seeds`,
//! `I_{i+1} = I_i ∪ Pre(I_i)` until no unsubsumed element is added,
//! recording every retained element as a numbered fact.

use std::fmt::Write as _;

use thiserror::Error;

/// Hooks for rendering an element inside a fact line.
pub trait RenderElement {
    /// The bracketed atom list, e.g. `b2(A),i1(_),hc(A)`.
    fn atoms_text(&self) -> String;
    /// The braced constraint, empty for `true`.
    fn constraint_text(&self) -> String;
}

/// A retained symbolic element with saturation provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact<E> {
    /// Saturation level at which the element was computed; 0 for seeds.
    pub iteration: u32,
    pub element: E,
    /// 1-based creation order.
    pub id: u32,
    /// Name of the rule applied backwards, `None` for seeds.
    pub rule: Option<String>,
    /// Id of the fact this one was regressed from, 0 for seeds.
    pub parent: u32,
}

/// Outcome of a saturation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<E> {
    /// Id of the first fact whose element covers an initial
    /// configuration, if any.
    pub covering_fact: Option<u32>,
    /// Every retained fact, in creation order. When the verdict is
    /// negative this is the full fixpoint; on a positive verdict the
    /// run stops at the covering fact.
    pub facts: Vec<Fact<E>>,
    /// Number of predecessor levels computed before stabilization or
    /// the covering discovery.
    pub iterations: u32,
}

impl<E> Verdict<E> {
    pub fn coverable(&self) -> bool {
        self.covering_fact.is_some()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("saturation did not stabilize within {limit} iterations")]
    IterationBudgetExceeded { limit: u32 },
    #[error("trace reconstruction requires a coverable verdict")]
    NotCoverable,
}

/// Iterates predecessor accumulation with subsumption until no
/// unsubsumed element is added, or an initial configuration is covered.
///
/// A candidate is discarded iff some retained fact subsumes it;
/// retained facts are never deleted, which keeps provenance ids stable.
/// Facts are numbered by a fixed processing order: facts in creation
/// order, and within one fact whatever order `pre` emits (frontends
/// emit rules in declaration order with matchings enumerated
/// canonically), so two runs on the same input are identical.
pub fn saturate<E: Clone>(
    seeds: Vec<E>,
    mut pre: impl FnMut(&E) -> Vec<(String, E)>,
    subsumes: impl Fn(&E, &E) -> bool,
    init_member: impl Fn(&E) -> bool,
    max_iterations: Option<u32>,
) -> Result<Verdict<E>, EngineError> {
    assert!(!seeds.is_empty(), "saturate needs at least one seed");
    let mut facts: Vec<Fact<E>> = Vec::new();
    for seed in seeds {
        if facts.iter().any(|f| subsumes(&f.element, &seed)) {
            continue;
        }
        let id = facts.len() as u32 + 1;
        let covered = init_member(&seed);
        facts.push(Fact {
            iteration: 0,
            element: seed,
            id,
            rule: None,
            parent: 0,
        });
        if covered {
            return Ok(Verdict {
                covering_fact: Some(id),
                facts,
                iterations: 0,
            });
        }
    }

    let mut level_start = 0usize;
    for level in 1u32.. {
        if let Some(limit) = max_iterations {
            if level > limit {
                return Err(EngineError::IterationBudgetExceeded { limit });
            }
        }
        let level_end = facts.len();
        let mut added = false;
        for idx in level_start..level_end {
            let parent_id = facts[idx].id;
            let candidates = pre(&facts[idx].element);
            for (rule, candidate) in candidates {
                if facts.iter().any(|f| subsumes(&f.element, &candidate)) {
                    continue;
                }
                let id = facts.len() as u32 + 1;
                let covered = init_member(&candidate);
                facts.push(Fact {
                    iteration: level,
                    element: candidate,
                    id,
                    rule: Some(rule),
                    parent: parent_id,
                });
                added = true;
                if covered {
                    return Ok(Verdict {
                        covering_fact: Some(id),
                        facts,
                        iterations: level,
                    });
                }
            }
        }
        if !added {
            return Ok(Verdict {
                covering_fact: None,
                facts,
                iterations: level - 1,
            });
        }
        level_start = level_end;
    }
    unreachable!("the loop exits by fixpoint, covering or budget")
}

/// The rule names along the parent chain from the covering fact to the
/// seed, in execution order: the covering fact lies nearest the initial
/// state, so its rule fires first.
pub fn reconstruct_trace<E>(verdict: &Verdict<E>) -> Result<Vec<String>, EngineError> {
    let Some(start) = verdict.covering_fact else {
        return Err(EngineError::NotCoverable);
    };
    let mut out = Vec::new();
    let mut id = start;
    while id != 0 {
        let fact = &verdict.facts[(id - 1) as usize];
        if let Some(rule) = &fact.rule {
            out.push(rule.clone());
        }
        id = fact.parent;
    }
    Ok(out)
}

/// One line per fact, newest first, in the shape
/// `f(i, [atoms], {constraint}, n, parent, rule).` with `0` standing
/// for the missing rule and parent of a seed.
pub fn render_facts<E: RenderElement>(verdict: &Verdict<E>) -> String {
    let mut out = String::new();
    for fact in verdict.facts.iter().rev() {
        let _ = writeln!(
            out,
            "f({}, [{}], {{{}}}, {}, {}, {}).",
            fact.iteration,
            fact.element.atoms_text(),
            fact.element.constraint_text(),
            fact.id,
            fact.parent,
            fact.rule.as_deref().unwrap_or("0"),
        );
    }
    out
}
