//! Rewriting rules, symbolic one-step predecessors and ground forward
//! steps.

use std::collections::{BTreeMap, BTreeSet};

use crate::msr::config::{Atom, ConstrainedConfig, GroundAtom, GroundConfig};
use crate::msr::constraint::{IdConstraint, VarId};

/// A rule `lhs -> rhs : constraint`. Variables occurring only on the
/// right-hand side are instantiated freely by the step relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsrRule {
    pub name: String,
    lhs: Vec<Atom>,
    rhs: Vec<Atom>,
    constraint: IdConstraint,
    n_vars: u32,
}

impl MsrRule {
    /// Builds a rule, compacting variables by first occurrence over
    /// `lhs ⊕ rhs` and restricting the constraint to those variables.
    pub fn new(
        name: impl Into<String>,
        lhs: Vec<Atom>,
        rhs: Vec<Atom>,
        constraint: IdConstraint,
    ) -> Self {
        let mut map: BTreeMap<VarId, VarId> = BTreeMap::new();
        let mut next = 0u32;
        let mut compact = |atoms: Vec<Atom>| -> Vec<Atom> {
            atoms
                .into_iter()
                .map(|a| {
                    let args = a
                        .args
                        .iter()
                        .map(|v| {
                            *map.entry(*v).or_insert_with(|| {
                                let id = VarId(next);
                                next += 1;
                                id
                            })
                        })
                        .collect();
                    Atom::new(a.pred, args)
                })
                .collect()
        };
        let lhs = compact(lhs);
        let rhs = compact(rhs);
        let keep: BTreeSet<VarId> = map.keys().copied().collect();
        let constraint = constraint.project(&keep).rename(|v| map[&v]);
        MsrRule {
            name: name.into(),
            lhs,
            rhs,
            constraint,
            n_vars: next,
        }
    }

    pub fn lhs(&self) -> &[Atom] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[Atom] {
        &self.rhs
    }

    pub fn constraint(&self) -> &IdConstraint {
        &self.constraint
    }

    pub fn is_monadic(&self) -> bool {
        self.lhs.iter().chain(&self.rhs).all(|a| a.args.len() <= 1)
    }
}

/// Symbolic one-step predecessors of the upward closure of `target`
/// under `rule`.
///
/// For every nonempty partial injective predicate-preserving matching
/// of a sub-multiset of the target atoms into the rule's right-hand
/// side, emits `lhs ⊕ unmatched-remainder` under the projected
/// conjunction of both constraints and the matching equalities.
/// Matchings with an empty overlap are omitted: their predecessors
/// already lie in the upward closure of the target.
///
/// Matchings are enumerated canonically: matched subsets by decreasing
/// size (then ascending bitmask), injective assignments in ascending
/// right-hand-side order.
pub fn pre_rule(target: &ConstrainedConfig, rule: &MsrRule) -> Vec<ConstrainedConfig> {
    let shift = target.n_vars();
    let shifted = |v: VarId| VarId(v.0 + shift);
    let rhs: Vec<Atom> = rule
        .rhs
        .iter()
        .map(|a| Atom::new(a.pred.clone(), a.args.iter().map(|v| shifted(*v)).collect()))
        .collect();
    let lhs: Vec<Atom> = rule
        .lhs
        .iter()
        .map(|a| Atom::new(a.pred.clone(), a.args.iter().map(|v| shifted(*v)).collect()))
        .collect();
    let rule_constraint = rule.constraint.rename(shifted);

    let t_atoms = target.atoms();
    let n = t_atoms.len();
    // candidate rhs positions per target atom
    let candidates: Vec<Vec<usize>> = t_atoms
        .iter()
        .map(|a| {
            rhs.iter()
                .enumerate()
                .filter(|(_, r)| r.pred == a.pred && r.args.len() == a.args.len())
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    // subsets by decreasing size, ascending bitmask within a size
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));

    let mut out = Vec::new();
    for mask in masks {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if subset.iter().any(|&i| candidates[i].is_empty()) {
            continue;
        }
        let mut assignment: Vec<usize> = Vec::with_capacity(subset.len());
        let mut used = vec![false; rhs.len()];
        enumerate_injections(&subset, &candidates, &mut assignment, &mut used, &mut |a| {
            let mut eqs: Vec<(VarId, VarId)> = Vec::new();
            for (&i, &j) in subset.iter().zip(a.iter()) {
                for (v, w) in t_atoms[i].args.iter().zip(&rhs[j].args) {
                    eqs.push((*v, *w));
                }
            }
            let matching = IdConstraint::from_atoms(&eqs, &[]);
            let combined = target
                .constraint()
                .conjoin(&rule_constraint)
                .conjoin(&matching);
            if !combined.is_satisfiable() {
                return;
            }
            let mut atoms: Vec<Atom> = lhs.clone();
            for (i, atom) in t_atoms.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    atoms.push(atom.clone());
                }
            }
            let keep: BTreeSet<VarId> = atoms.iter().flat_map(|a| a.args.iter().copied()).collect();
            let projected = combined.project(&keep);
            if let Some(cfg) = ConstrainedConfig::new(atoms, projected) {
                out.push(cfg);
            }
        });
    }
    out
}

fn enumerate_injections(
    subset: &[usize],
    candidates: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut impl FnMut(&[usize]),
) {
    if assignment.len() == subset.len() {
        emit(assignment);
        return;
    }
    let i = subset[assignment.len()];
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        used[j] = true;
        assignment.push(j);
        enumerate_injections(subset, candidates, assignment, used, emit);
        assignment.pop();
        used[j] = false;
    }
}

/// All ground successors of `n` under `rule`, without canonicalization.
/// Right-hand-side-only variables are instantiated sequentially from
/// the gap representatives of the identifiers in scope (one value below
/// the minimum, every existing value, one value inside each nonempty
/// gap, one value above the maximum).
pub fn step_instances(n: &GroundConfig, rule: &MsrRule) -> Vec<GroundConfig> {
    let occ: Vec<&GroundAtom> = n.occurrences().collect();
    let mut used = vec![false; occ.len()];
    let mut assign: BTreeMap<VarId, i64> = BTreeMap::new();
    let mut out: Vec<GroundConfig> = Vec::new();
    match_lhs(rule, &occ, 0, &mut used, &mut assign, &mut out);
    // drop duplicates, keeping first occurrence order
    let mut seen = BTreeSet::new();
    out.retain(|c| seen.insert(c.clone()));
    out
}

/// All ground successors of `n` under `rule`, canonicalized up to
/// order-isomorphism of identifiers and sorted.
pub fn step_forward(n: &GroundConfig, rule: &MsrRule) -> Vec<GroundConfig> {
    let mut out: Vec<GroundConfig> = step_instances(n, rule)
        .iter()
        .map(crate::msr::config::canonicalize_ground)
        .collect();
    out.sort();
    out.dedup();
    out
}

fn match_lhs(
    rule: &MsrRule,
    occ: &[&GroundAtom],
    i: usize,
    used: &mut [bool],
    assign: &mut BTreeMap<VarId, i64>,
    out: &mut Vec<GroundConfig>,
) {
    if i == rule.lhs.len() {
        let fresh: Vec<VarId> = (0..rule.n_vars)
            .map(VarId)
            .filter(|v| !assign.contains_key(v))
            .collect();
        instantiate_fresh(rule, occ, used, &fresh, 0, assign, out);
        return;
    }
    let atom = &rule.lhs[i];
    for j in 0..occ.len() {
        if used[j] || occ[j].pred != atom.pred || occ[j].args.len() != atom.args.len() {
            continue;
        }
        let mut added: Vec<VarId> = Vec::new();
        let mut ok = true;
        for (v, d) in atom.args.iter().zip(&occ[j].args) {
            match assign.get(v) {
                Some(&e) if e != *d => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    assign.insert(*v, *d);
                    added.push(*v);
                }
            }
        }
        if ok {
            used[j] = true;
            match_lhs(rule, occ, i + 1, used, assign, out);
            used[j] = false;
        }
        for v in added {
            assign.remove(&v);
        }
    }
}

/// Representatives of the order types an extra identifier can take
/// relative to the values in scope.
fn gap_representatives(in_scope: &BTreeSet<i64>) -> Vec<i64> {
    if in_scope.is_empty() {
        return vec![0];
    }
    let vals: Vec<i64> = in_scope.iter().copied().collect();
    let mut out = vec![vals[0] - 1];
    for w in vals.windows(2) {
        out.push(w[0]);
        if w[1] - w[0] >= 2 {
            out.push(w[0] + 1);
        }
    }
    out.push(*vals.last().unwrap());
    out.push(vals.last().unwrap() + 1);
    out
}

fn instantiate_fresh(
    rule: &MsrRule,
    occ: &[&GroundAtom],
    used: &[bool],
    fresh: &[VarId],
    k: usize,
    assign: &mut BTreeMap<VarId, i64>,
    out: &mut Vec<GroundConfig>,
) {
    if k == fresh.len() {
        if !rule.constraint.eval(|v| assign[&v]) {
            return;
        }
        // successor = n - lhs(sigma) + rhs(sigma)
        let mut succ = GroundConfig::new();
        for (j, a) in occ.iter().enumerate() {
            if !used[j] {
                succ.insert((*a).clone(), 1);
            }
        }
        for a in &rule.rhs {
            let args = a.args.iter().map(|v| assign[v]).collect();
            succ.insert(GroundAtom::new(a.pred.clone(), args), 1);
        }
        out.push(succ);
        return;
    }
    let mut scope: BTreeSet<i64> = occ.iter().flat_map(|a| a.args.iter().copied()).collect();
    scope.extend(assign.values().copied());
    for val in gap_representatives(&scope) {
        assign.insert(fresh[k], val);
        instantiate_fresh(rule, occ, used, fresh, k + 1, assign, out);
        assign.remove(&fresh[k]);
    }
}
