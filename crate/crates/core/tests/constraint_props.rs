//! Agreement of the constraint operations with brute-force integer
//! assignment enumeration, plus order-theoretic properties.

use std::collections::BTreeSet;

use hcov_core::msr::{IdConstraint, VarId};
use proptest::prelude::*;

/// Raw atoms of a constraint, as the brute-force side sees them.
#[derive(Clone, Debug)]
struct RawConstraint {
    n_vars: u32,
    eqs: Vec<(u32, u32)>,
    gaps: Vec<(u32, u32, u32)>,
}

impl RawConstraint {
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

    /// A box large enough that satisfiability and entailment
    /// counterexamples over the integers compress into it: any chain of
    /// required differences is bounded by the sum of all gap atoms.
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

fn brute_satisfiable(c: &RawConstraint) -> bool {
    let b = c.box_bound();
    assignments(c.n_vars, 0, b).iter().any(|a| c.eval(a))
}

fn brute_entails(c1: &RawConstraint, c2: &RawConstraint) -> bool {
    let b = c1.box_bound().max(c2.box_bound());
    assignments(c1.n_vars.max(c2.n_vars), 0, b)
        .iter()
        .filter(|a| c1.eval(a))
        .all(|a| c2.eval(a))
}

/// The set of keep-assignments extendable to full integer solutions,
/// with extension values drawn from a window wide enough for any
/// eliminated chain.
fn brute_extendable(c: &RawConstraint, keep: &[u32], keep_assign: &[i64]) -> bool {
    let b = c.box_bound();
    let elim: Vec<u32> = (0..c.n_vars).filter(|v| !keep.contains(v)).collect();
    let lo = -(2 * b);
    let hi = 3 * b;
    fn go(
        c: &RawConstraint,
        elim: &[u32],
        i: usize,
        partial: &mut Vec<i64>,
        lo: i64,
        hi: i64,
    ) -> bool {
        if i == elim.len() {
            return c.eval(partial);
        }
        for v in lo..=hi {
            partial[elim[i] as usize] = v;
            if go(c, elim, i + 1, partial, lo, hi) {
                return true;
            }
        }
        false
    }
    let mut partial = vec![0i64; c.n_vars as usize];
    for (v, val) in keep.iter().zip(keep_assign) {
        partial[*v as usize] = *val;
    }
    go(c, &elim, 0, &mut partial, lo, hi)
}

fn arb_raw(max_vars: u32) -> impl Strategy<Value = RawConstraint> {
    (2..=max_vars).prop_flat_map(move |n| {
        let eq = (0..n, 0..n);
        let gap = (0..n, 0..n, 0u32..=2);
        (
            prop::collection::vec(eq, 0..3),
            prop::collection::vec(gap, 0..4),
        )
            .prop_map(move |(eqs, gaps)| RawConstraint {
                n_vars: n,
                eqs,
                gaps,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn satisfiability_agrees_with_enumeration(raw in arb_raw(4)) {
        prop_assert_eq!(raw.build().is_satisfiable(), brute_satisfiable(&raw));
    }

    #[test]
    fn entailment_agrees_with_enumeration(c1 in arb_raw(4), c2 in arb_raw(4)) {
        // entailment is total: vacuously true from an unsatisfiable
        // left side, false into one (when the left side has solutions)
        prop_assert_eq!(c1.build().entails(&c2.build()), brute_entails(&c1, &c2));
    }

    #[test]
    fn projection_is_exactly_extendability(raw in arb_raw(4), keep_mask in 1u32..15) {
        let built = raw.build();
        prop_assume!(built.is_satisfiable());
        let keep: Vec<u32> = (0..raw.n_vars).filter(|v| keep_mask & (1 << v) != 0).collect();
        let keep_set: BTreeSet<VarId> = keep.iter().map(|&v| VarId(v)).collect();
        let projected = built.project(&keep_set);
        let b = raw.box_bound();
        for assign in assignments(keep.len() as u32, 0, b) {
            let projected_says = projected.eval(|v| {
                let pos = keep.iter().position(|&k| VarId(k) == v).unwrap();
                assign[pos]
            });
            let extendable = brute_extendable(&raw, &keep, &assign);
            prop_assert_eq!(projected_says, extendable,
                "raw={:?} keep={:?} assign={:?}", raw, keep, assign);
        }
    }

    #[test]
    fn conjunction_solutions_are_intersections(c1 in arb_raw(3), c2 in arb_raw(3)) {
        let both = RawConstraint {
            n_vars: c1.n_vars.max(c2.n_vars),
            eqs: c1.eqs.iter().chain(&c2.eqs).copied().collect(),
            gaps: c1.gaps.iter().chain(&c2.gaps).copied().collect(),
        };
        let conj = c1.build().conjoin(&c2.build());
        prop_assert_eq!(conj.is_satisfiable(), brute_satisfiable(&both));
        if conj.is_satisfiable() {
            let b = both.box_bound();
            for assign in assignments(both.n_vars, 0, b.min(4)) {
                prop_assert_eq!(conj.eval(|v| assign[v.0 as usize]), both.eval(&assign));
            }
        }
    }

    #[test]
    fn entailment_is_reflexive_and_transitive(
        c1 in arb_raw(4), c2 in arb_raw(4), c3 in arb_raw(4)
    ) {
        let (b1, b2, b3) = (c1.build(), c2.build(), c3.build());
        prop_assume!(b1.is_satisfiable());
        prop_assert!(b1.entails(&b1));
        if b1.entails(&b2) && b2.entails(&b3) {
            prop_assert!(b1.entails(&b3));
        }
    }
}
