//! Conjunctions of equalities and order atoms over identifier
//! variables, kept in a transitively closed normal form.
//!
//! The surface language has only `x = y` and `x < y`. Internally every
//! strict atom is a gap atom `y - x > k` (so `x < y` is gap 0), because
//! plain `<` is not closed under existential elimination over the
//! integers: eliminating `y` from `x < y, y < z` yields `z - x > 1`.
//! Elimination composes gaps as `j + k + 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// The primitive atoms of a constraint: equality pairs and gap
/// triples `(x, y, k)` meaning `y - x > k`.
pub type ConstraintAtoms = (Vec<(VarId, VarId)>, Vec<(VarId, VarId, u32)>);

/// A variable local to one rule or constrained configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A satisfiable constraint in closed normal form, or the unsatisfiable
/// marker.
///
/// Invariants of the closed form:
/// - `rep` maps every mentioned variable to the least variable of its
///   equality class;
/// - `gaps` is keyed by representative pairs and closed under
///   composition (`j + k + 1`), holding the largest derivable gap;
/// - a satisfiable constraint has no self-gap and no gap between merged
///   classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdConstraint {
    rep: BTreeMap<VarId, VarId>,
    gaps: BTreeMap<(VarId, VarId), u32>,
    unsat: bool,
}

impl Default for IdConstraint {
    fn default() -> Self {
        Self::tru()
    }
}

impl IdConstraint {
    /// The empty conjunction.
    pub fn tru() -> Self {
        IdConstraint {
            rep: BTreeMap::new(),
            gaps: BTreeMap::new(),
            unsat: false,
        }
    }

    pub fn unsatisfiable() -> Self {
        IdConstraint {
            rep: BTreeMap::new(),
            gaps: BTreeMap::new(),
            unsat: true,
        }
    }

    /// Builds the closed form of a conjunction of `x = y` and
    /// `y - x > k` atoms.
    pub fn from_atoms(eqs: &[(VarId, VarId)], gaps: &[(VarId, VarId, u32)]) -> Self {
        // union-find over the mentioned variables
        let mut parent: BTreeMap<VarId, VarId> = BTreeMap::new();
        let find = |parent: &mut BTreeMap<VarId, VarId>, mut v: VarId| -> VarId {
            while let Some(&p) = parent.get(&v) {
                if p == v {
                    break;
                }
                v = p;
            }
            v
        };
        let touch = |parent: &mut BTreeMap<VarId, VarId>, v: VarId| {
            parent.entry(v).or_insert(v);
        };
        for &(x, y) in eqs {
            touch(&mut parent, x);
            touch(&mut parent, y);
            let rx = find(&mut parent, x);
            let ry = find(&mut parent, y);
            if rx != ry {
                let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                parent.insert(hi, lo);
            }
        }
        for &(x, y, _) in gaps {
            touch(&mut parent, x);
            touch(&mut parent, y);
        }
        // path-compress into a plain representative map (least member)
        let vars: Vec<VarId> = parent.keys().copied().collect();
        let mut rep = BTreeMap::new();
        for v in vars {
            let r = find(&mut parent, v);
            rep.insert(v, r);
        }

        let mut gmap: BTreeMap<(VarId, VarId), u32> = BTreeMap::new();
        let mut unsat = false;
        for &(x, y, k) in gaps {
            let rx = rep[&x];
            let ry = rep[&y];
            if rx == ry {
                unsat = true;
                break;
            }
            let e = gmap.entry((rx, ry)).or_insert(k);
            *e = (*e).max(k);
        }
        if unsat {
            return Self::unsatisfiable();
        }

        // max-plus transitive closure over representatives
        loop {
            let mut updates: Vec<(VarId, VarId, u32)> = Vec::new();
            for (&(a, m), &j) in &gmap {
                for (&(m2, b), &k) in &gmap {
                    if m2 != m {
                        continue;
                    }
                    let via = j.saturating_add(k).saturating_add(1);
                    if gmap.get(&(a, b)).is_none_or(|&e| via > e) {
                        updates.push((a, b, via));
                    }
                }
            }
            if updates.is_empty() {
                break;
            }
            for (a, b, via) in updates {
                if a == b {
                    return Self::unsatisfiable();
                }
                let e = gmap.entry((a, b)).or_insert(via);
                *e = (*e).max(via);
            }
        }

        IdConstraint {
            rep,
            gaps: gmap,
            unsat: false,
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.unsat
    }

    /// True for the empty conjunction (no equalities between distinct
    /// variables, no gaps).
    pub fn is_true(&self) -> bool {
        !self.unsat && self.gaps.is_empty() && self.rep.iter().all(|(v, r)| v == r)
    }

    /// All variables mentioned by some atom.
    pub fn vars(&self) -> BTreeSet<VarId> {
        self.rep.keys().copied().collect()
    }

    /// The primitive atoms of the closed form: equality pairs (chained
    /// per class) and gap atoms on representatives.
    pub fn atoms(&self) -> ConstraintAtoms {
        let mut classes: BTreeMap<VarId, Vec<VarId>> = BTreeMap::new();
        for (&v, &r) in &self.rep {
            classes.entry(r).or_default().push(v);
        }
        let mut eqs = Vec::new();
        for members in classes.values() {
            for pair in members.windows(2) {
                eqs.push((pair[0], pair[1]));
            }
        }
        let gaps = self.gaps.iter().map(|(&(a, b), &k)| (a, b, k)).collect();
        (eqs, gaps)
    }

    pub fn same_class(&self, x: VarId, y: VarId) -> bool {
        if x == y {
            return true;
        }
        match (self.rep.get(&x), self.rep.get(&y)) {
            (Some(rx), Some(ry)) => rx == ry,
            _ => false,
        }
    }

    /// The canonical member (class minimum) standing for `v`.
    pub fn canonical_var(&self, v: VarId) -> VarId {
        self.rep_of(v)
    }

    fn rep_of(&self, v: VarId) -> VarId {
        self.rep.get(&v).copied().unwrap_or(v)
    }

    /// The closed gap `y - x > k` between the classes of `x` and `y`,
    /// if any.
    pub fn gap_between(&self, x: VarId, y: VarId) -> Option<u32> {
        self.gaps.get(&(self.rep_of(x), self.rep_of(y))).copied()
    }

    /// True iff `v` occurs in a nontrivial atom.
    pub fn constrains(&self, v: VarId) -> bool {
        if self.unsat || !self.rep.contains_key(&v) {
            return false;
        }
        let r = self.rep_of(v);
        let shares_class = self.rep.iter().any(|(&w, &rw)| w != v && rw == r);
        shares_class || self.gaps.keys().any(|&(a, b)| a == r || b == r)
    }

    /// Conjunction; may yield the unsatisfiable marker.
    pub fn conjoin(&self, other: &IdConstraint) -> IdConstraint {
        if self.unsat || other.unsat {
            return Self::unsatisfiable();
        }
        let (mut eqs, mut gaps) = self.atoms();
        let (e2, g2) = other.atoms();
        eqs.extend(e2);
        gaps.extend(g2);
        Self::from_atoms(&eqs, &gaps)
    }

    /// Existential elimination of every variable outside `keep`. The
    /// result is exactly the set of assignments of kept variables that
    /// extend to full solutions over the integers.
    pub fn project(&self, keep: &BTreeSet<VarId>) -> IdConstraint {
        if self.unsat {
            return Self::unsatisfiable();
        }
        let mut classes: BTreeMap<VarId, Vec<VarId>> = BTreeMap::new();
        for (&v, &r) in &self.rep {
            classes.entry(r).or_default().push(v);
        }
        // new representative per surviving class
        let mut new_rep_of_class: BTreeMap<VarId, VarId> = BTreeMap::new();
        let mut rep = BTreeMap::new();
        for (&r, members) in &classes {
            let kept: Vec<VarId> = members
                .iter()
                .copied()
                .filter(|v| keep.contains(v))
                .collect();
            if let Some(&nr) = kept.first() {
                new_rep_of_class.insert(r, nr);
                for v in kept {
                    rep.insert(v, nr);
                }
            }
        }
        let mut gaps = BTreeMap::new();
        for (&(a, b), &k) in &self.gaps {
            if let (Some(&na), Some(&nb)) = (new_rep_of_class.get(&a), new_rep_of_class.get(&b)) {
                gaps.insert((na, nb), k);
            }
        }
        IdConstraint {
            rep,
            gaps,
            unsat: false,
        }
    }

    /// True iff every integer solution of `self` is a solution of
    /// `other`.
    pub fn entails(&self, other: &IdConstraint) -> bool {
        if self.unsat {
            return true;
        }
        if other.unsat {
            return false;
        }
        let (eqs, gaps) = other.atoms();
        for (x, y) in eqs {
            if !self.same_class(x, y) {
                return false;
            }
        }
        for (x, y, k) in gaps {
            match self.gap_between(x, y) {
                Some(g) if g >= k => {}
                _ => return false,
            }
        }
        true
    }

    /// Rewrites every variable through `map`. The mapping must be
    /// injective on the mentioned variables.
    pub fn rename(&self, map: impl Fn(VarId) -> VarId) -> IdConstraint {
        if self.unsat {
            return Self::unsatisfiable();
        }
        let (eqs, gaps) = self.atoms();
        let eqs: Vec<_> = eqs.iter().map(|&(x, y)| (map(x), map(y))).collect();
        let gaps: Vec<_> = gaps.iter().map(|&(x, y, k)| (map(x), map(y), k)).collect();
        Self::from_atoms(&eqs, &gaps)
    }

    /// Evaluates the constraint under a ground assignment.
    pub fn eval(&self, assign: impl Fn(VarId) -> i64) -> bool {
        if self.unsat {
            return false;
        }
        let (eqs, gaps) = self.atoms();
        eqs.iter().all(|&(x, y)| assign(x) == assign(y))
            && gaps
                .iter()
                .all(|&(x, y, k)| assign(y) - assign(x) > k as i64)
    }

    /// Renders the constraint with caller-supplied variable names,
    /// dropping gap atoms derivable from the remaining ones. `true`
    /// renders as the empty string.
    pub fn render(&self, name: impl Fn(VarId) -> String) -> String {
        if self.unsat {
            return "false".to_string();
        }
        let (eqs, gaps) = self.atoms();
        // transitive reduction of the gap atoms, greedily in key order
        let mut kept: Vec<(VarId, VarId, u32)> = gaps.clone();
        let mut i = 0;
        while i < kept.len() {
            let (a, b, k) = kept[i];
            let derivable = kept.iter().enumerate().any(|(p, &(x, m, j1))| {
                p != i
                    && x == a
                    && kept.iter().enumerate().any(|(q, &(m2, y, j2))| {
                        q != i && m2 == m && y == b && j1.saturating_add(j2) + 1 >= k
                    })
            });
            if derivable {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        let mut parts: Vec<String> = Vec::new();
        for (x, y) in eqs {
            parts.push(format!("{}={}", name(x), name(y)));
        }
        for (x, y, k) in kept {
            if k == 0 {
                parts.push(format!("{}<{}", name(x), name(y)));
            } else {
                parts.push(format!("{}-{}>{}", name(y), name(x), k));
            }
        }
        parts.join(", ")
    }
}
