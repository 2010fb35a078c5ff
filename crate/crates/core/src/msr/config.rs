//! Atoms, ground configurations and constrained configurations.
//!
//! A constrained configuration pairs a multiset of atoms with variables
//! and an identifier constraint; it denotes every ground configuration
//! that contains a satisfying instance of the atoms, i.e. an
//! upward-closed set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::msr::constraint::{IdConstraint, VarId};
use crate::wqo::{Multiset, Subsumption};

/// An atom with variable arguments. Monadic models use arity 0 or 1;
/// general arities are allowed for forward exploration only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<VarId>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<VarId>) -> Self {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn nullary(pred: impl Into<String>) -> Self {
        Atom::new(pred, vec![])
    }

    pub fn unary(pred: impl Into<String>, v: VarId) -> Self {
        Atom::new(pred, vec![v])
    }
}

/// A ground atom; identifiers are integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<i64>,
}

impl GroundAtom {
    pub fn new(pred: impl Into<String>, args: Vec<i64>) -> Self {
        GroundAtom {
            pred: pred.into(),
            args,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            f.write_str(&self.pred)
        } else {
            write!(f, "{}(", self.pred)?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        }
    }
}

/// A concrete configuration: a multiset of ground atoms.
pub type GroundConfig = Multiset<GroundAtom>;

/// Renders a ground configuration as a comma-separated atom list.
pub fn render_ground(n: &GroundConfig) -> String {
    let parts: Vec<String> = n.occurrences().map(|a| a.to_string()).collect();
    parts.join(", ")
}

/// Remaps identifiers to their rank among the distinct identifiers of
/// the configuration. Order-isomorphic configurations canonicalize to
/// the same value.
pub fn canonicalize_ground(n: &GroundConfig) -> GroundConfig {
    let ids: BTreeSet<i64> = n
        .occurrences()
        .flat_map(|a| a.args.iter().copied())
        .collect();
    let rank: BTreeMap<i64, i64> = ids.into_iter().zip(0..).collect();
    n.occurrences()
        .map(|a| GroundAtom::new(a.pred.clone(), a.args.iter().map(|v| rank[v]).collect()))
        .collect()
}

/// A multiset of atoms with variables plus an identifier constraint,
/// denoting all larger satisfying instances. Unsatisfiable combinations
/// are rejected at construction; variables are renamed canonically (by
/// first occurrence in the atom list) and the atom order is preserved
/// for rendering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstrainedConfig {
    atoms: Vec<Atom>,
    constraint: IdConstraint,
    n_vars: u32,
}

impl ConstrainedConfig {
    /// Builds a constrained configuration, dropping unsatisfiable
    /// inputs. Variables equated by the constraint collapse into one,
    /// the constraint is projected onto the variables that occur in the
    /// atoms, and the variables are renamed by first occurrence.
    pub fn new(atoms: Vec<Atom>, constraint: IdConstraint) -> Option<Self> {
        if !constraint.is_satisfiable() {
            return None;
        }
        let mut map: BTreeMap<VarId, VarId> = BTreeMap::new();
        let mut next = 0u32;
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|a| {
                let args = a
                    .args
                    .iter()
                    .map(|v| {
                        let rep = constraint.canonical_var(*v);
                        *map.entry(rep).or_insert_with(|| {
                            let id = VarId(next);
                            next += 1;
                            id
                        })
                    })
                    .collect();
                Atom::new(a.pred, args)
            })
            .collect();
        let keep: BTreeSet<VarId> = map.keys().copied().collect();
        let constraint = constraint.project(&keep).rename(|v| map[&v]);
        Some(ConstrainedConfig {
            atoms,
            constraint,
            n_vars: next,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn constraint(&self) -> &IdConstraint {
        &self.constraint
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn is_monadic(&self) -> bool {
        self.atoms.iter().all(|a| a.args.len() <= 1)
    }

    /// Display names: letters for variables that occur more than once
    /// or are constrained, `_` for the rest, assigned in first
    /// occurrence order.
    fn var_names(&self) -> BTreeMap<VarId, String> {
        let mut occurrences: BTreeMap<VarId, u32> = BTreeMap::new();
        for a in &self.atoms {
            for v in &a.args {
                *occurrences.entry(*v).or_insert(0) += 1;
            }
        }
        let mut names = BTreeMap::new();
        let mut next = 0usize;
        for a in &self.atoms {
            for v in &a.args {
                if names.contains_key(v) {
                    continue;
                }
                let named = occurrences[v] > 1 || self.constraint.constrains(*v);
                let name = if named {
                    let n = letter_name(next);
                    next += 1;
                    n
                } else {
                    "_".to_string()
                };
                names.insert(*v, name);
            }
        }
        names
    }

    /// The atom list as rendered inside fact lines: `p(A),q(_),ok`.
    pub fn atoms_text(&self) -> String {
        let names = self.var_names();
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| {
                if a.args.is_empty() {
                    a.pred.clone()
                } else {
                    let args: Vec<&str> = a.args.iter().map(|v| names[v].as_str()).collect();
                    format!("{}({})", a.pred, args.join(","))
                }
            })
            .collect();
        parts.join(",")
    }

    /// The constraint as rendered inside fact lines; `true` is empty.
    pub fn constraint_text(&self) -> String {
        let names = self.var_names();
        self.constraint
            .render(|v| names.get(&v).cloned().unwrap_or_else(|| v.to_string()))
    }

    /// True iff some injective predicate-preserving map of the atoms
    /// into `n` admits an assignment of the variables to the mapped
    /// identifiers satisfying the constraint.
    pub fn covers_ground(&self, n: &GroundConfig) -> bool {
        let occ: Vec<&GroundAtom> = n.occurrences().collect();
        let mut used = vec![false; occ.len()];
        let mut assign: BTreeMap<VarId, i64> = BTreeMap::new();
        self.match_ground(0, &occ, &mut used, &mut assign)
    }

    fn match_ground(
        &self,
        i: usize,
        occ: &[&GroundAtom],
        used: &mut [bool],
        assign: &mut BTreeMap<VarId, i64>,
    ) -> bool {
        if i == self.atoms.len() {
            return self.constraint.eval(|v| assign[&v]);
        }
        let atom = &self.atoms[i];
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
                if self.match_ground(i + 1, occ, used, assign) {
                    return true;
                }
                used[j] = false;
            }
            for v in added {
                assign.remove(&v);
            }
        }
        false
    }

    /// True iff `Inst(other) ⊆ Inst(self)`: there is an injective
    /// predicate-preserving map θ of the atoms of `self` into the atoms
    /// of `other` such that `other.constraint` entails the image of
    /// `self.constraint` (together with the equalities induced when one
    /// variable maps to several).
    pub fn subsumes_config(&self, other: &ConstrainedConfig) -> bool {
        // quick predicate-count pruning
        let mut counts: BTreeMap<(&str, usize), i64> = BTreeMap::new();
        for a in &other.atoms {
            *counts.entry((a.pred.as_str(), a.args.len())).or_insert(0) += 1;
        }
        for a in &self.atoms {
            let c = counts.entry((a.pred.as_str(), a.args.len())).or_insert(0);
            *c -= 1;
            if *c < 0 {
                return false;
            }
        }
        let mut used = vec![false; other.atoms.len()];
        let mut images: BTreeMap<VarId, Vec<VarId>> = BTreeMap::new();
        self.match_symbolic(0, other, &mut used, &mut images)
    }

    fn match_symbolic(
        &self,
        i: usize,
        other: &ConstrainedConfig,
        used: &mut [bool],
        images: &mut BTreeMap<VarId, Vec<VarId>>,
    ) -> bool {
        if i == self.atoms.len() {
            // the image of each variable must be forced equal, and the
            // renamed constraint entailed
            let mut eqs: Vec<(VarId, VarId)> = Vec::new();
            for ws in images.values() {
                for w in &ws[1..] {
                    eqs.push((ws[0], *w));
                }
            }
            let renamed = self.constraint.rename(|v| images[&v][0]);
            let (mut e2, g2) = renamed.atoms();
            e2.extend(eqs);
            let required = IdConstraint::from_atoms(&e2, &g2);
            return other.constraint.entails(&required);
        }
        let atom = &self.atoms[i];
        for j in 0..other.atoms.len() {
            let cand = &other.atoms[j];
            if used[j] || cand.pred != atom.pred || cand.args.len() != atom.args.len() {
                continue;
            }
            used[j] = true;
            for (v, w) in atom.args.iter().zip(&cand.args) {
                images.entry(*v).or_default().push(*w);
            }
            if self.match_symbolic(i + 1, other, used, images) {
                return true;
            }
            for v in &atom.args {
                let ws = images.get_mut(v).unwrap();
                ws.pop();
                if ws.is_empty() {
                    images.remove(v);
                }
            }
            used[j] = false;
        }
        false
    }
}

impl Subsumption for ConstrainedConfig {
    fn subsumes(&self, other: &Self) -> bool {
        self.subsumes_config(other)
    }
}

impl fmt::Display for ConstrainedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] : {{{}}}",
            self.atoms_text(),
            self.constraint_text()
        )
    }
}

fn letter_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("V{}", i - 25)
    }
}
