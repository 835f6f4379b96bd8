//! Events, labels, and compact event sets.
//!
//! Every structure in this crate owns a table of events sorted by id; an
//! [`EventSet`] is a bitmask over the positions of that table. Desk-scale
//! instances stay far below the 64-event ceiling.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Stable identifier of an event, unique within one structure.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventId(pub String);

impl EventId {
    pub fn new(s: impl Into<String>) -> Self {
        EventId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for EventId {
    fn from(s: &str) -> Self {
        EventId(s.to_string())
    }
}

/// Action label drawn from the alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

/// A labelled event.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Event {
    pub id: EventId,
    pub label: Label,
}

impl Event {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Event { id: EventId::new(id), label: Label::new(label) }
    }
}

/// Maximum number of events per structure.
pub const MAX_EVENTS: usize = 64;

/// A finite set of events, as a bitmask over the owner's event table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EventSet(pub u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_EVENTS);
        EventSet(1 << i)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_EVENTS);
        if n == 64 {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut bits = 0u64;
        for i in iter {
            debug_assert!(i < MAX_EVENTS);
            bits |= 1 << i;
        }
        EventSet(bits)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_EVENTS && self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: usize) -> Self {
        EventSet(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        EventSet(self.0 & !(1 << i))
    }

    pub fn union(self, other: EventSet) -> Self {
        EventSet(self.0 | other.0)
    }

    pub fn inter(self, other: EventSet) -> Self {
        EventSet(self.0 & other.0)
    }

    pub fn diff(self, other: EventSet) -> Self {
        EventSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: EventSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: EventSet) -> bool {
        self.is_subset(other) && self != other
    }

    /// Ascending member indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this set, in ascending bit order (∅ first, self last).
    pub fn subsets(self) -> impl Iterator<Item = EventSet> {
        let mask = self.0;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = EventSet(sub);
            if sub == mask {
                done = true;
            } else {
                sub = (sub.wrapping_sub(mask)) & mask;
            }
            Some(out)
        })
    }

    /// Compares as ascending index sequences (shorter prefix wins), the
    /// order used for canonical witnesses.
    pub fn lex_cmp(self, other: EventSet) -> std::cmp::Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return std::cmp::Ordering::Equal,
                (None, Some(_)) => return std::cmp::Ordering::Less,
                (Some(_), None) => return std::cmp::Ordering::Greater,
                (Some(x), Some(y)) => {
                    if x != y {
                        return x.cmp(&y);
                    }
                }
            }
        }
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
