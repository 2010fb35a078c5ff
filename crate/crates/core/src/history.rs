//! Event logs: words (most-recent-first) or bags of events, the
//! extension operator, the log ordering, and log predecessors for
//! backward search.

use std::fmt;

use crate::wqo::{word_embeds, Basis, Multiset, Subsumption};

/// An event symbol from a finite declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(pub String);

impl Event {
    pub fn new(s: impl Into<String>) -> Self {
        Event(s.into())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogMode {
    Word,
    Bag,
}

impl fmt::Display for LogMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogMode::Word => f.write_str("word"),
            LogMode::Bag => f.write_str("bag"),
        }
    }
}

/// The log of a computation. Word payloads keep the most recent event
/// first, so extension is prepending; bag payloads count occurrences.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum History {
    Word(Vec<Event>),
    Bag(Multiset<Event>),
}

impl History {
    pub fn empty(mode: LogMode) -> Self {
        match mode {
            LogMode::Word => History::Word(Vec::new()),
            LogMode::Bag => History::Bag(Multiset::new()),
        }
    }

    pub fn mode(&self) -> LogMode {
        match self {
            History::Word(_) => LogMode::Word,
            History::Bag(_) => LogMode::Bag,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            History::Word(w) => w.is_empty(),
            History::Bag(b) => b.is_empty(),
        }
    }

    /// The extension `e + h`: prepend for words, add one occurrence for
    /// bags.
    pub fn extend(&self, e: &Event) -> History {
        match self {
            History::Word(w) => {
                let mut out = Vec::with_capacity(w.len() + 1);
                out.push(e.clone());
                out.extend(w.iter().cloned());
                History::Word(out)
            }
            History::Bag(b) => {
                let mut out = b.clone();
                out.insert(e.clone(), 1);
                History::Bag(out)
            }
        }
    }

    /// Log ordering: subword embedding for words, per-symbol count
    /// comparison for bags. Comparing different modes is a usage error.
    pub fn leq(&self, other: &History) -> bool {
        match (self, other) {
            (History::Word(a), History::Word(b)) => word_embeds(a, b),
            (History::Bag(a), History::Bag(b)) => a.contained_in(b),
            _ => panic!("history mode mismatch: {} vs {}", self.mode(), other.mode()),
        }
    }

    /// A minimal basis of `{ h : self <= extend(emitted, h) }`, the
    /// symbolic inverse of the extension operator. Always a singleton.
    pub fn pre(&self, emitted: &Event) -> Basis<History> {
        let elem = match self {
            History::Word(w) => {
                if w.first() == Some(emitted) {
                    History::Word(w[1..].to_vec())
                } else {
                    self.clone()
                }
            }
            History::Bag(b) => {
                let mut out = b.clone();
                out.remove_one(emitted);
                History::Bag(out)
            }
        };
        Basis::new(vec![elem])
    }
}

impl Subsumption for History {
    fn subsumes(&self, other: &Self) -> bool {
        self.leq(other)
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            History::Word(w) => {
                for (i, e) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            History::Bag(b) => {
                for (i, (e, c)) in b.counts().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{e}:{c}")?;
                }
                Ok(())
            }
        }
    }
}
