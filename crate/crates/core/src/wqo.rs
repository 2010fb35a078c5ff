//! Quasi-order combinators and finite-basis representations of
//! upward-closed sets.
//!
//! An upward-closed set is represented by a finite antichain of minimal
//! elements (a [`Basis`]). Element types plug in through the
//! [`Subsumption`] trait: `a.subsumes(b)` means the upward closure of
//! `a` contains the upward closure of `b`, i.e. `a` is below `b` in the
//! underlying order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

/// Denotation containment between symbolic elements.
///
/// `a.subsumes(b)` holds iff every concrete element above `b` is also
/// above `a`. For plain ordered values this is just `a <= b`.
pub trait Subsumption {
    fn subsumes(&self, other: &Self) -> bool;
}

/// A finite multiset with nonnegative counts. Zero counts are never
/// stored, so structural equality is semantic equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multiset<T: Ord>(BTreeMap<T, u32>);

impl<T: Ord> Multiset<T> {
    pub fn new() -> Self {
        Multiset(BTreeMap::new())
    }

    pub fn count(&self, t: &T) -> u32 {
        self.0.get(t).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, t: T, n: u32) {
        if n > 0 {
            *self.0.entry(t).or_insert(0) += n;
        }
    }

    /// Removes one occurrence; returns false if absent.
    pub fn remove_one(&mut self, t: &T) -> bool
    where
        T: Clone,
    {
        match self.0.get_mut(t) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.0.remove(t);
                true
            }
            None => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of occurrences.
    pub fn len(&self) -> usize {
        self.0.values().map(|c| *c as usize).sum()
    }

    /// Distinct elements with their counts.
    pub fn counts(&self) -> impl Iterator<Item = (&T, u32)> {
        self.0.iter().map(|(t, c)| (t, *c))
    }

    /// Every occurrence, expanded.
    pub fn occurrences(&self) -> impl Iterator<Item = &T> {
        self.0
            .iter()
            .flat_map(|(t, c)| std::iter::repeat_n(t, *c as usize))
    }

    /// Multiset union (pointwise sum).
    pub fn union(&self, other: &Self) -> Self
    where
        T: Clone,
    {
        let mut out = self.clone();
        for (t, c) in other.counts() {
            out.insert(t.clone(), c);
        }
        out
    }

    /// Truncated (natural) multiset subtraction.
    pub fn saturating_sub(&self, other: &Self) -> Self
    where
        T: Clone,
    {
        let mut out = Multiset::new();
        for (t, c) in self.counts() {
            let d = c.saturating_sub(other.count(t));
            if d > 0 {
                out.insert(t.clone(), d);
            }
        }
        out
    }

    /// Pointwise `<=`, i.e. multiset inclusion.
    pub fn contained_in(&self, other: &Self) -> bool {
        self.counts().all(|(t, c)| c <= other.count(t))
    }
}

impl<T: Ord> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for t in iter {
            m.insert(t, 1);
        }
        m
    }
}

impl<T: Ord + Clone> Subsumption for Multiset<T> {
    fn subsumes(&self, other: &Self) -> bool {
        self.contained_in(other)
    }
}

/// Order on base symbols. The only instance is equality over a finite
/// declared alphabet; richer element orders are an extension point.
#[derive(Clone, Debug)]
pub struct ElemOrder {
    kind: ElemOrderKind,
}

#[derive(Clone, Debug)]
enum ElemOrderKind {
    FiniteEquality { alphabet: BTreeSet<String> },
}

impl ElemOrder {
    pub fn finite_equality<I, S>(alphabet: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ElemOrder {
            kind: ElemOrderKind::FiniteEquality {
                alphabet: alphabet.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn contains(&self, sym: &str) -> bool {
        match &self.kind {
            ElemOrderKind::FiniteEquality { alphabet } => alphabet.contains(sym),
        }
    }

    /// Reflexive and transitive by construction.
    pub fn leq(&self, a: &str, b: &str) -> bool {
        match &self.kind {
            ElemOrderKind::FiniteEquality { .. } => a == b,
        }
    }
}

/// True iff `u` is a (not necessarily contiguous) subsequence of `v`.
/// Greedy leftmost matching; letters compare by equality.
pub fn word_embeds<T: Eq>(u: &[T], v: &[T]) -> bool {
    let mut it = v.iter();
    u.iter().all(|a| it.any(|b| a == b))
}

/// Multiset embedding under an element order: an injective map from
/// `m1` into `m2` with every image above its source. For the
/// finite-equality order this is per-symbol count comparison.
pub fn multiset_embeds(m1: &Multiset<String>, m2: &Multiset<String>, order: &ElemOrder) -> bool {
    match &order.kind {
        ElemOrderKind::FiniteEquality { .. } => m1.contained_in(m2),
    }
}

/// General multiset embedding for an arbitrary element preorder,
/// computed by maximum bipartite matching over occurrences.
pub fn multiset_embeds_by<T: Ord>(
    m1: &Multiset<T>,
    m2: &Multiset<T>,
    leq: impl Fn(&T, &T) -> bool,
) -> bool {
    let left: Vec<&T> = m1.occurrences().collect();
    let right: Vec<&T> = m2.occurrences().collect();
    if left.len() > right.len() {
        return false;
    }
    // adjacency: left i may map to right j iff left[i] <= right[j]
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|a| {
            right
                .iter()
                .enumerate()
                .filter(|(_, b)| leq(a, b))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut match_right: Vec<Option<usize>> = vec![None; right.len()];
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        match_right: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if match_right[j].is_none()
                    || augment(match_right[j].unwrap(), adj, match_right, seen)
                {
                    match_right[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    (0..left.len()).all(|i| {
        let mut seen = vec![false; right.len()];
        augment(i, &adj, &mut match_right, &mut seen)
    })
}

/// Componentwise comparison of pairs under two component orders.
pub fn product_leq<A, B>(
    p1: &(A, B),
    p2: &(A, B),
    leq_a: impl Fn(&A, &A) -> bool,
    leq_b: impl Fn(&B, &B) -> bool,
) -> bool {
    leq_a(&p1.0, &p2.0) && leq_b(&p1.1, &p2.1)
}

/// Discards elements subsumed by another element, keeping the first
/// occurrence among mutually-equivalent ones, in input order.
pub fn minimize<E: Subsumption>(elements: Vec<E>) -> Vec<E> {
    let mut kept: Vec<E> = Vec::new();
    for e in elements {
        if kept.iter().any(|k| k.subsumes(&e)) {
            continue;
        }
        kept.retain(|k| !e.subsumes(k));
        kept.push(e);
    }
    kept
}

/// A finite antichain of symbolic elements denoting the union of their
/// upward closures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis<E> {
    elements: Vec<E>,
}

impl<E: Subsumption> Basis<E> {
    /// Builds a basis, discarding redundant elements.
    pub fn new(elements: Vec<E>) -> Self {
        Basis {
            elements: minimize(elements),
        }
    }

    /// True iff some basis element is below `x`.
    pub fn member(&self, x: &E) -> bool {
        self.elements.iter().any(|e| e.subsumes(x))
    }
}

impl<E> Basis<E> {
    /// Membership of a concrete element of a possibly different domain,
    /// given the covering relation between the two.
    pub fn member_by<C>(&self, x: &C, covers: impl Fn(&E, &C) -> bool) -> bool {
        self.elements.iter().any(|e| covers(e, x))
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl<E: fmt::Display> fmt::Display for Basis<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}
