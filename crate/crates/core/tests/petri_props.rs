//! Monotonicity, oracle agreement on generated nets, Parikh-counter
//! logs, and the embedding of finite-state automata as one-token nets.

use std::collections::BTreeSet;

use hcov_core::engine::reconstruct_trace;
use hcov_core::history::{Event, History, LogMode};
use hcov_core::oracle::{explore, replay};
use hcov_core::petri::{fire, hcov_petri, HConfig, Marking, PetriNetH, Transition};
use hcov_core::wqo::{Multiset, Subsumption};

struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn ms(pairs: &[(&str, u32)]) -> Marking {
    let mut m = Multiset::new();
    for (s, c) in pairs {
        m.insert(s.to_string(), *c);
    }
    m
}

/// Random net over <=4 places and <=4 transitions; events drawn from a
/// two-letter alphabet so depth-10 word logs stay tractable.
fn random_net(rng: &mut Rng, log_mode: LogMode) -> PetriNetH {
    let n_places = 2 + rng.below(3) as usize;
    let places: Vec<String> = (0..n_places).map(|i| format!("p{i}")).collect();
    let events = ["e1", "e2"];
    let n_trans = 1 + rng.below(4) as usize;
    let mut transitions = Vec::new();
    for t in 0..n_trans {
        let mut pre = Multiset::new();
        let mut post = Multiset::new();
        for _ in 0..(1 + rng.below(2)) {
            pre.insert(places[rng.below(n_places as u64) as usize].clone(), 1);
        }
        for _ in 0..rng.below(3) {
            post.insert(places[rng.below(n_places as u64) as usize].clone(), 1);
        }
        transitions.push(Transition {
            name: format!("t{t}"),
            pre,
            post,
            event: Event::new(events[rng.below(2) as usize]),
        });
    }
    let mut initial = Multiset::new();
    for _ in 0..(1 + rng.below(3)) {
        initial.insert(places[rng.below(n_places as u64) as usize].clone(), 1);
    }
    PetriNetH::new(
        places.into_iter().collect(),
        events.iter().map(|s| s.to_string()).collect(),
        transitions,
        initial,
        log_mode,
    )
    .unwrap()
}

fn random_target(rng: &mut Rng, net: &PetriNetH) -> HConfig {
    let places: Vec<&String> = net.places().iter().collect();
    let mut marking = Multiset::new();
    for _ in 0..rng.below(3) {
        marking.insert(places[rng.below(places.len() as u64) as usize].clone(), 1);
    }
    let history = match net.log_mode() {
        LogMode::Word => {
            let len = rng.below(4) as usize;
            History::Word(
                (0..len)
                    .map(|_| Event::new(if rng.below(2) == 0 { "e1" } else { "e2" }))
                    .collect(),
            )
        }
        LogMode::Bag => {
            let mut bag = Multiset::new();
            for _ in 0..rng.below(4) {
                bag.insert(Event::new(if rng.below(2) == 0 { "e1" } else { "e2" }), 1);
            }
            History::Bag(bag)
        }
    };
    HConfig::new(marking, history)
}

/// hwsts monotonicity: a transition enabled below stays enabled above,
/// with the successors related.
#[test]
fn firing_is_monotone() {
    let mut rng = Rng::new(0x5eed);
    let mut fired = 0;
    for i in 0..200 {
        let mode = if i % 2 == 0 {
            LogMode::Word
        } else {
            LogMode::Bag
        };
        let net = random_net(&mut rng, mode);
        let c1 = net.initial_config();
        // c3 is c1 with extra tokens and an extra logged event
        let mut bigger = c1.marking.clone();
        bigger.insert(format!("p{}", rng.below(2)), 1 + rng.below(2) as u32);
        let c3 = HConfig::new(bigger, c1.history.extend(&Event::new("e1")));
        assert!(c1.subsumes(&c3));
        for t in net.transitions() {
            if let Ok(c2) = fire(&net, &c1, &t.name) {
                let c4 = fire(&net, &c3, &t.name).expect("monotonicity: still enabled");
                assert!(c2.subsumes(&c4), "fire {} on {c1} vs {c3}", t.name);
                fired += 1;
            }
        }
    }
    assert!(fired > 50);
}

/// Engine and bounded forward search agree on generated nets; every
/// coverable trace replays to a covering configuration.
#[test]
fn engine_and_oracle_agree_on_random_nets() {
    let mut rng = Rng::new(0xabcd);
    let mut coverable = 0;
    let mut not_coverable = 0;
    for i in 0..40 {
        let mode = if i % 2 == 0 {
            LogMode::Word
        } else {
            LogMode::Bag
        };
        let net = random_net(&mut rng, mode);
        let target = random_target(&mut rng, &net);
        let verdict = hcov_petri(&net, &target, Some(200)).expect("saturation terminates");
        if verdict.coverable() {
            coverable += 1;
            let trace = reconstruct_trace(&verdict).unwrap();
            // the oracle finds a witness within the trace length
            let result = explore(&net, &net.initial_config(), &target, trace.len());
            assert!(
                result.covering_witness.is_some(),
                "engine coverable but no witness at depth {}: {net:?} target {target}",
                trace.len()
            );
            // and the trace itself replays to a covering configuration
            let final_config =
                replay(&net, &net.initial_config(), &trace, Some(&target)).expect("trace replays");
            assert!(target.subsumes(&final_config));
        } else {
            not_coverable += 1;
            let result = explore(&net, &net.initial_config(), &target, 10);
            assert!(
                result.covering_witness.is_none(),
                "engine not-coverable but witness found: {net:?} target {target}"
            );
        }
    }
    assert!(coverable >= 5, "generator too weak: {coverable} coverable");
    assert!(not_coverable >= 5, "generator too weak: {not_coverable}");
}

/// With bag logs the per-event counters never decrease along a run.
#[test]
fn bag_logs_grow_monotonically() {
    let mut rng = Rng::new(0x77aa);
    for _ in 0..100 {
        let net = random_net(&mut rng, LogMode::Bag);
        let mut config = net.initial_config();
        let mut previous = config.history.clone();
        for _ in 0..10 {
            let enabled: Vec<&Transition> = net
                .transitions()
                .iter()
                .filter(|t| t.pre.contained_in(&config.marking))
                .collect();
            if enabled.is_empty() {
                break;
            }
            let t = enabled[rng.below(enabled.len() as u64) as usize];
            config = fire(&net, &config, &t.name).unwrap();
            assert!(previous.leq(&config.history), "counters never decrease");
            previous = config.history.clone();
        }
    }
}

/// A three-state automaton embeds as a net with one token: place per
/// state, singleton pre and post. Reproduces the labeled-transition
/// semantics: coverability of (state, subword) questions.
#[test]
fn automaton_embeds_as_one_token_net() {
    // s0 --a--> s1 --b--> s2, plus a self-loop s1 --c--> s1
    let net = PetriNetH::new(
        ["s0", "s1", "s2"].iter().map(|s| s.to_string()).collect(),
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect(),
        vec![
            Transition {
                name: "ta".into(),
                pre: ms(&[("s0", 1)]),
                post: ms(&[("s1", 1)]),
                event: Event::new("a"),
            },
            Transition {
                name: "tc".into(),
                pre: ms(&[("s1", 1)]),
                post: ms(&[("s1", 1)]),
                event: Event::new("c"),
            },
            Transition {
                name: "tb".into(),
                pre: ms(&[("s1", 1)]),
                post: ms(&[("s2", 1)]),
                event: Event::new("b"),
            },
        ],
        ms(&[("s0", 1)]),
        LogMode::Word,
    )
    .unwrap();

    // one token moves through the states
    let c = net.initial_config();
    let c = fire(&net, &c, "ta").unwrap();
    let c = fire(&net, &c, "tc").unwrap();
    let c = fire(&net, &c, "tb").unwrap();
    assert_eq!(c.marking, ms(&[("s2", 1)]));
    assert_eq!(c.marking.len(), 1, "exactly one token at all times");

    // can t_b fire after t_a with a c in between? subword query "b c a"
    // (most recent first) at state s2
    let word = |s: &str| History::Word(s.split_whitespace().map(Event::new).collect());
    let target = HConfig::new(ms(&[("s2", 1)]), word("b c a"));
    let verdict = hcov_petri(&net, &target, None).unwrap();
    assert!(verdict.coverable());
    assert_eq!(
        reconstruct_trace(&verdict).unwrap(),
        vec!["ta".to_string(), "tc".to_string(), "tb".to_string()]
    );

    // "a b" as a subword (i.e. b before a) is impossible
    let target = HConfig::new(ms(&[("s2", 1)]), word("a b"));
    let verdict = hcov_petri(&net, &target, None).unwrap();
    assert!(!verdict.coverable());
    let result = explore(&net, &net.initial_config(), &target, 10);
    assert!(result.covering_witness.is_none());
}

/// Counter-constraint targets of the form c_e >= a are bag targets.
#[test]
fn parikh_counter_target() {
    let net = PetriNetH::new(
        ["s0", "s1"].iter().map(|s| s.to_string()).collect(),
        ["a", "b"].iter().map(|s| s.to_string()).collect(),
        vec![
            Transition {
                name: "go".into(),
                pre: ms(&[("s0", 1)]),
                post: ms(&[("s1", 1)]),
                event: Event::new("a"),
            },
            Transition {
                name: "back".into(),
                pre: ms(&[("s1", 1)]),
                post: ms(&[("s0", 1)]),
                event: Event::new("b"),
            },
        ],
        ms(&[("s0", 1)]),
        LogMode::Bag,
    )
    .unwrap();
    // c_a >= 2 and c_b >= 1: needs two round trips
    let mut bag = Multiset::new();
    bag.insert(Event::new("a"), 2);
    bag.insert(Event::new("b"), 1);
    let target = HConfig::new(Multiset::new(), History::Bag(bag));
    let verdict = hcov_petri(&net, &target, None).unwrap();
    assert!(verdict.coverable());
    let trace = reconstruct_trace(&verdict).unwrap();
    let final_config = replay(&net, &net.initial_config(), &trace, Some(&target)).unwrap();
    assert!(target.subsumes(&final_config));
}

/// Probing chain monotonicity: once a probe is covered by the
/// accumulated facts at some iteration, it stays covered later.
#[test]
fn accumulated_denotations_grow() {
    let mut rng = Rng::new(0x1234);
    for _ in 0..20 {
        let net = random_net(&mut rng, LogMode::Word);
        let target = random_target(&mut rng, &net);
        let verdict = hcov_petri(&net, &target, Some(200)).unwrap();
        let probe = net.initial_config();
        let mut covered_at: Option<u32> = None;
        for level in 0..=verdict.iterations {
            let covered = verdict
                .facts
                .iter()
                .filter(|f| f.iteration <= level)
                .any(|f| f.element.subsumes(&probe));
            if let Some(first) = covered_at {
                assert!(covered, "probe covered at {first} but not at {level}");
            } else if covered {
                covered_at = Some(level);
            }
        }
    }
}

/// The set of canonical (marking, log) states visited by the oracle is
/// insensitive to the exploration depth ordering artifacts: exploring
/// deeper only adds states.
#[test]
fn explore_visited_grows_with_depth() {
    let mut rng = Rng::new(0x9876);
    let net = random_net(&mut rng, LogMode::Word);
    let unreachable = HConfig::new(ms(&[("p0", 9)]), History::empty(LogMode::Word));
    let mut previous: Option<BTreeSet<HConfig>> = None;
    for depth in 0..5 {
        let result = explore(&net, &net.initial_config(), &unreachable, depth);
        if let Some(prev) = &previous {
            assert!(prev.is_subset(&result.visited));
        }
        previous = Some(result.visited);
    }
}
