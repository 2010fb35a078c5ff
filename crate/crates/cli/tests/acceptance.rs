//! The acceptance suite: one test per criterion, each printing a
//! pass/fail line and enforcing its runtime budget.
//!
//! Run with `cargo test -p hcov-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use hcov_cli::parser::parse_model;
use hcov_core::engine::reconstruct_trace;
use hcov_core::history::{Event, History, LogMode};
use hcov_core::msr::{hcov_msr, IdConstraint, VarId};
use hcov_core::oracle::{explore, replay};
use hcov_core::petri::{hcov_petri, HConfig, PetriNetH, Transition};
use hcov_core::wqo::{
    minimize, multiset_embeds, product_leq, word_embeds, Basis, ElemOrder, Multiset,
};

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model_path(name: &str) -> String {
    models_dir().join(name).to_str().unwrap().to_string()
}

fn finish(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance {criterion}: PASS ({elapsed:.2?}, budget {budget:.2?})");
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its runtime budget: {elapsed:.2?} > {budget:.2?}"
    );
}

/// Deterministic xorshift generator, so failures reproduce.
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

/// Criterion 1: the unsafe leak model reproduces the published
/// fixpoint verbatim: 3 iterations, 4 facts, the four fact lines,
/// coverable from the concrete initial configuration, trace 1 2 3.
#[test]
fn criterion_1_unsafe_fixpoint_verbatim() {
    let started = Instant::now();
    let text = std::fs::read_to_string(model_path("android_unsafe.hcov")).unwrap();
    let model = parse_model(&text).unwrap();
    let program = model.to_msr().unwrap();
    let (_, target) = &program.targets[0];
    let verdict = hcov_msr(&program.system, target, &program.initials, Some(100)).unwrap();
    assert!(verdict.coverable());
    assert_eq!(verdict.iterations, 3);
    assert_eq!(verdict.facts.len(), 4);
    let expected = "\
f(3, [c1(A),a1(_),b1(_),i1(_),hc(A)], {}, 4, 3, 1).
f(2, [b1(_),a2(A),i1(_),hc(A)], {}, 3, 2, 2).
f(1, [b2(A),i1(_),hc(A)], {}, 2, 1, 3).
f(0, [hc(A),hi(A)], {}, 1, 0, 0).
";
    assert_eq!(hcov_core::engine::render_facts(&verdict), expected);
    assert_eq!(reconstruct_trace(&verdict).unwrap(), vec!["1", "2", "3"]);
    finish(
        "criterion 1 (unsafe fixpoint verbatim)",
        started,
        Duration::from_secs(1),
    );
}

/// Criterion 2: the repaired model's fixpoint contains the four
/// published facts (a strict superset is permitted), is not coverable
/// from typed initial configurations with one and with two instances
/// per component type, and the oracle finds no witness to depth 8.
#[test]
fn criterion_2_safe_fixpoint_and_verdict() {
    let started = Instant::now();
    let text = std::fs::read_to_string(model_path("android_safe.hcov")).unwrap();
    let model = parse_model(&text).unwrap();
    let program = model.to_msr().unwrap();
    assert_eq!(program.initials.len(), 2, "one and two instances per type");
    let (_, target) = &program.targets[0];
    let verdict = hcov_msr(&program.system, target, &program.initials, Some(100)).unwrap();
    assert!(!verdict.coverable());
    let published = [
        "[c1(_),a1(_),ok,b1(A),i1(_),hc(A)] : {}",
        "[b1(A),a2(_),ok,i1(_),hc(A)] : {}",
        "[b2(A),i1(_),ok,hc(A)] : {}",
        "[hc(A),hi(A)] : {}",
    ];
    let rendered: Vec<String> = verdict
        .facts
        .iter()
        .map(|f| f.element.to_string())
        .collect();
    for want in published {
        assert!(
            rendered.iter().any(|r| r == want),
            "fixpoint misses {want}: {rendered:#?}"
        );
    }
    for initial in &program.initials {
        let result = explore(&program.system, initial, target, 8);
        assert!(result.covering_witness.is_none(), "oracle found a witness");
    }
    finish(
        "criterion 2 (safe fixpoint and verdict)",
        started,
        Duration::from_secs(5),
    );
}

/// Criterion 3: the correspondence model covers a2(x),h_req_t(x) with a
/// replayable witness; deleting the interception rule flips the verdict
/// (oracle-confirmed to depth 8).
#[test]
fn criterion_3_correspondence() {
    let started = Instant::now();
    let text = std::fs::read_to_string(model_path("correspondence.hcov")).unwrap();
    let program = parse_model(&text).unwrap().to_msr().unwrap();
    let target = &program
        .targets
        .iter()
        .find(|(n, _)| n == "intercepted")
        .unwrap()
        .1;
    let verdict = hcov_msr(&program.system, target, &program.initials, Some(100)).unwrap();
    assert!(verdict.coverable());
    let trace = reconstruct_trace(&verdict).unwrap();
    let final_config = replay(&program.system, &program.initials[0], &trace, Some(target))
        .expect("witness replays");
    assert!(target.covers_ground(&final_config));

    let text = std::fs::read_to_string(model_path("correspondence_no_trudy.hcov")).unwrap();
    let program = parse_model(&text).unwrap().to_msr().unwrap();
    let target = &program
        .targets
        .iter()
        .find(|(n, _)| n == "intercepted")
        .unwrap()
        .1;
    let verdict = hcov_msr(&program.system, target, &program.initials, Some(100)).unwrap();
    assert!(!verdict.coverable(), "no interception without the rule");
    for initial in &program.initials {
        let result = explore(&program.system, initial, target, 8);
        assert!(result.covering_witness.is_none());
    }
    finish(
        "criterion 3 (correspondence)",
        started,
        Duration::from_secs(5),
    );
}

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
        LogMode::Word => History::Word(
            (0..rng.below(4) as usize)
                .map(|_| Event::new(if rng.below(2) == 0 { "e1" } else { "e2" }))
                .collect(),
        ),
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

/// Criterion 4: on generated nets, engine and oracle verdicts agree and
/// every coverable trace replays.
#[test]
fn criterion_4_petri_oracle_agreement() {
    let started = Instant::now();
    let mut rng = Rng::new(0xc0ffee);
    let mut nets = 0;
    while nets < 24 {
        let mode = if nets % 2 == 0 {
            LogMode::Word
        } else {
            LogMode::Bag
        };
        let net = random_net(&mut rng, mode);
        let target = random_target(&mut rng, &net);
        nets += 1;
        let verdict = hcov_petri(&net, &target, Some(300)).expect("saturation terminates");
        if verdict.coverable() {
            let trace = reconstruct_trace(&verdict).unwrap();
            let result = explore(&net, &net.initial_config(), &target, trace.len());
            assert!(
                result.covering_witness.is_some(),
                "no witness at depth {} for {net:?} {target}",
                trace.len()
            );
            let final_config =
                replay(&net, &net.initial_config(), &trace, Some(&target)).expect("replays");
            assert!(
                product_leq(
                    &(target.marking.clone(), target.history.clone()),
                    &(final_config.marking.clone(), final_config.history.clone()),
                    |a, b| a.contained_in(b),
                    |a, b| a.leq(b),
                ),
                "trace does not cover the target"
            );
        } else {
            let result = explore(&net, &net.initial_config(), &target, 10);
            assert!(
                result.covering_witness.is_none(),
                "witness found for a not-coverable target: {net:?} {target}"
            );
        }
    }
    finish(
        "criterion 4 (petri oracle agreement, 24 nets)",
        started,
        Duration::from_secs(30),
    );
}

/// Raw constraint atoms as the brute-force side sees them.
#[derive(Clone, Debug)]
struct RawConstraint {
    n_vars: u32,
    eqs: Vec<(u32, u32)>,
    gaps: Vec<(u32, u32, u32)>,
}

impl RawConstraint {
    fn random(rng: &mut Rng) -> Self {
        let n_vars = 2 + rng.below(3) as u32;
        let mut eqs = Vec::new();
        let mut gaps = Vec::new();
        for _ in 0..rng.below(4) {
            let x = rng.below(n_vars as u64) as u32;
            let y = rng.below(n_vars as u64) as u32;
            if rng.below(3) == 0 {
                eqs.push((x, y));
            } else {
                gaps.push((x, y, rng.below(3) as u32));
            }
        }
        RawConstraint { n_vars, eqs, gaps }
    }

    fn build(&self) -> IdConstraint {
        let eqs: Vec<_> = self
            .eqs
            .iter()
            .map(|&(x, y)| (VarId(x), VarId(y)))
            .collect();
        let gaps: Vec<_> = self
            .gaps
            .iter()
            .map(|&(x, y, k)| (VarId(x), VarId(y), k))
            .collect();
        IdConstraint::from_atoms(&eqs, &gaps)
    }

    fn eval(&self, assign: &[i64]) -> bool {
        self.eqs
            .iter()
            .all(|&(x, y)| assign[x as usize] == assign[y as usize])
            && self
                .gaps
                .iter()
                .all(|&(x, y, k)| assign[y as usize] - assign[x as usize] > k as i64)
    }

    /// Large enough that integer solutions and counterexamples compress
    /// into [0, bound].
    fn box_bound(&self) -> i64 {
        let gap_sum: i64 = self.gaps.iter().map(|&(_, _, k)| k as i64 + 1).sum();
        gap_sum + self.n_vars as i64 + 1
    }
}

fn assignments(n_vars: u32, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n_vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                (lo..=hi).map(move |v| {
                    let mut a2 = a.clone();
                    a2.push(v);
                    a2
                })
            })
            .collect();
    }
    out
}

/// Extendability of a keep-assignment to a full integer solution, by
/// search over a window wide enough for any eliminated chain, pruning
/// on violated fully-assigned atoms.
fn extendable(c: &RawConstraint, keep: &[u32], keep_vals: &[i64]) -> bool {
    let b = c.box_bound();
    let elim: Vec<u32> = (0..c.n_vars).filter(|v| !keep.contains(v)).collect();
    let lo = -(2 * b);
    let hi = 3 * b;
    let mut partial = vec![i64::MIN; c.n_vars as usize];
    for (v, val) in keep.iter().zip(keep_vals) {
        partial[*v as usize] = *val;
    }
    fn consistent_so_far(c: &RawConstraint, partial: &[i64]) -> bool {
        let known = |v: u32| partial[v as usize] != i64::MIN;
        c.eqs
            .iter()
            .all(|&(x, y)| !(known(x) && known(y)) || partial[x as usize] == partial[y as usize])
            && c.gaps.iter().all(|&(x, y, k)| {
                !(known(x) && known(y)) || partial[y as usize] - partial[x as usize] > k as i64
            })
    }
    fn go(
        c: &RawConstraint,
        elim: &[u32],
        i: usize,
        partial: &mut Vec<i64>,
        lo: i64,
        hi: i64,
    ) -> bool {
        if !consistent_so_far(c, partial) {
            return false;
        }
        if i == elim.len() {
            return true;
        }
        for v in lo..=hi {
            partial[elim[i] as usize] = v;
            if go(c, elim, i + 1, partial, lo, hi) {
                return true;
            }
        }
        partial[elim[i] as usize] = i64::MIN;
        false
    }
    go(c, &elim, 0, &mut partial, lo, hi)
}

/// Criterion 5: satisfiability, entailment and projection agree with
/// brute-force integer enumeration on 500 random constraints.
#[test]
fn criterion_5_constraint_solver_equivalence() {
    let started = Instant::now();
    let mut rng = Rng::new(0x5eed5);
    let mut previous: Option<RawConstraint> = None;
    for case in 0..500 {
        let raw = RawConstraint::random(&mut rng);
        let built = raw.build();
        let bound = raw.box_bound();

        // satisfiability
        let brute_sat = assignments(raw.n_vars, 0, bound)
            .iter()
            .any(|a| raw.eval(a));
        assert_eq!(built.is_satisfiable(), brute_sat, "case {case}: {raw:?}");

        // entailment against the previous constraint (vacuous truth
        // from an unsatisfiable left side)
        if let Some(prev) = &previous {
            let n = raw.n_vars.max(prev.n_vars);
            let b = bound.max(prev.box_bound());
            let brute = assignments(n, 0, b)
                .iter()
                .filter(|a| raw.eval(a))
                .all(|a| prev.eval(a));
            assert_eq!(
                built.entails(&prev.build()),
                brute,
                "case {case}: {raw:?} |= {prev:?}"
            );
        }

        // projection: solutions of the projected constraint over the
        // criterion box {0..5} are exactly the extendable assignments
        if built.is_satisfiable() {
            let keep: Vec<u32> = (0..raw.n_vars).filter(|_| rng.below(2) == 0).collect();
            let keep_set: BTreeSet<VarId> = keep.iter().map(|&v| VarId(v)).collect();
            let projected = built.project(&keep_set);
            for vals in assignments(keep.len() as u32, 0, 5) {
                let says = projected.eval(|v| {
                    let pos = keep.iter().position(|&k| VarId(k) == v).unwrap();
                    vals[pos]
                });
                let truth = extendable(&raw, &keep, &vals);
                assert_eq!(
                    says, truth,
                    "case {case}: {raw:?} keep {keep:?} vals {vals:?}"
                );
            }
        }
        previous = Some(raw);
    }
    finish(
        "criterion 5 (constraint solver vs brute force, 500 cases)",
        started,
        Duration::from_secs(10),
    );
}

/// Criterion 6: reflexivity, transitivity, oracle equivalence and
/// minimize idempotence for the order combinators and histories, 1000
/// random cases per property.
#[test]
fn criterion_6_wqo_property_suite() {
    let started = Instant::now();
    let mut rng = Rng::new(0x60a7);
    let word = |rng: &mut Rng, max_len: u64| -> Vec<String> {
        (0..rng.below(max_len + 1))
            .map(|_| format!("e{}", rng.below(3)))
            .collect()
    };
    let multiset = |rng: &mut Rng| -> Multiset<String> {
        let mut m = Multiset::new();
        for _ in 0..rng.below(8) {
            m.insert(format!("s{}", rng.below(5)), 1);
        }
        m
    };
    fn subseq_oracle<T: Eq>(u: &[T], v: &[T]) -> bool {
        if u.is_empty() {
            return true;
        }
        if v.is_empty() {
            return false;
        }
        (u[0] == v[0] && subseq_oracle(&u[1..], &v[1..])) || subseq_oracle(u, &v[1..])
    }
    fn inject_oracle(left: &[String], right: &[String], used: &mut Vec<bool>) -> bool {
        if left.is_empty() {
            return true;
        }
        for j in 0..right.len() {
            if !used[j] && left[0] == right[j] {
                used[j] = true;
                if inject_oracle(&left[1..], right, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    let order = ElemOrder::finite_equality(["s0", "s1", "s2", "s3", "s4"]);

    // reflexivity and transitivity, word and multiset embeddings
    for _ in 0..1000 {
        let (a, b, c) = (word(&mut rng, 8), word(&mut rng, 8), word(&mut rng, 8));
        assert!(word_embeds(&a, &a));
        if word_embeds(&a, &b) && word_embeds(&b, &c) {
            assert!(word_embeds(&a, &c));
        }
        let (x, y, z) = (multiset(&mut rng), multiset(&mut rng), multiset(&mut rng));
        assert!(multiset_embeds(&x, &x, &order));
        if multiset_embeds(&x, &y, &order) && multiset_embeds(&y, &z, &order) {
            assert!(multiset_embeds(&x, &z, &order));
        }
    }
    // oracle equivalence
    for _ in 0..1000 {
        let (a, b) = (word(&mut rng, 6), word(&mut rng, 6));
        assert_eq!(word_embeds(&a, &b), subseq_oracle(&a, &b));
        let (x, y) = (multiset(&mut rng), multiset(&mut rng));
        let left: Vec<String> = x.occurrences().cloned().collect();
        let right: Vec<String> = y.occurrences().cloned().collect();
        let mut used = vec![false; right.len()];
        assert_eq!(
            multiset_embeds(&x, &y, &order),
            inject_oracle(&left, &right, &mut used)
        );
    }
    // minimize idempotence and membership preservation
    for _ in 0..1000 {
        let elems: Vec<Multiset<String>> = (0..rng.below(7)).map(|_| multiset(&mut rng)).collect();
        let probe = multiset(&mut rng);
        let once = minimize(elems.clone());
        assert_eq!(once, minimize(once.clone()));
        assert_eq!(
            Basis::new(elems).member(&probe),
            Basis::new(once).member(&probe)
        );
    }
    // history monotone compatibility and product order
    for _ in 0..1000 {
        let a = History::Word(word(&mut rng, 6).iter().map(Event::new).collect());
        let b = History::Word(word(&mut rng, 6).iter().map(Event::new).collect());
        let e = Event::new(format!("e{}", rng.below(3)));
        if a.leq(&b) {
            assert!(a.extend(&e).leq(&b.extend(&e)));
        }
        let (m1, m2) = (multiset(&mut rng), multiset(&mut rng));
        assert_eq!(
            product_leq(
                &(m1.clone(), a.clone()),
                &(m2.clone(), b.clone()),
                |x, y| x.contained_in(y),
                |x, y| x.leq(y),
            ),
            m1.contained_in(&m2) && a.leq(&b)
        );
    }
    finish(
        "criterion 6 (wqo property suite, 1000 cases each)",
        started,
        Duration::from_secs(10),
    );
}

/// Criterion 7: two consecutive runs of the criterion-1 check produce
/// byte-identical --emit-facts output.
#[test]
fn criterion_7_determinism() {
    let started = Instant::now();
    let path = model_path("android_unsafe.hcov");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hcov"))
            .args(["check", &path, "conflict", "--emit-facts", "--trace"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(second.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout, "runs differ byte-wise");
    assert!(!first.stdout.is_empty());
    finish(
        "criterion 7 (determinism)",
        started,
        Duration::from_secs(10),
    );
}
