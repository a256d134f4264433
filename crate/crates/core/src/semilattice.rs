//! Semilattice layer: letter sets, the interpretation of semilattice terms,
//! the canonical right inverse `pi`, and normalization.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::ParseError;
use crate::syntax::{Letter, SlTerm};

/// A nonempty set of letters: one symbol of a synchronous string.
///
/// Stored as a bitmask over `a..=z`. The order is lexicographic on the
/// sorted letter sequence, so `{a} < {a,b} < {a,c} < {b}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymSet(u32);

impl SymSet {
    pub fn from_bits(bits: u32) -> Option<SymSet> {
        if bits == 0 || bits >> Letter::COUNT != 0 {
            None
        } else {
            Some(SymSet(bits))
        }
    }

    pub fn singleton(l: Letter) -> SymSet {
        SymSet(1 << l.index())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Option<SymSet> {
        SymSet::from_bits(letters.into_iter().fold(0, |acc, l| acc | 1 << l.index()))
    }

    /// Builds a set from a string of letters, e.g. `"ab"`. Panics on bad input.
    pub fn of(letters: &str) -> SymSet {
        SymSet::from_letters(letters.chars().map(|c| Letter::new(c).expect("letter a..z")))
            .expect("nonempty letter set")
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, l: Letter) -> bool {
        self.0 & (1 << l.index()) != 0
    }

    pub fn is_subset(self, other: SymSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SymSet) -> SymSet {
        SymSet(self.0 | other.0)
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..Letter::COUNT).filter(move |i| self.0 & (1 << i) != 0).map(Letter::from_index)
    }

    /// All nonempty subsets, in ascending bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = SymSet> {
        let full = self.0;
        let mut next = Some(full & full.wrapping_neg());
        // Walk submasks upwards: s' = (s - full) & full.
        std::iter::from_fn(move || {
            let s = next?;
            next = if s == full { None } else { Some((s.wrapping_sub(full)) & full) };
            Some(SymSet(s))
        })
    }

    pub fn parse(text: &str) -> Result<SymSet, ParseError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or(ParseError::Syntax { offset: 0, message: "expected a set literal like {a,b}".into() })?;
        let mut bits = 0u32;
        for part in inner.split(',') {
            let part = part.trim();
            let mut chars = part.chars();
            match (chars.next().and_then(Letter::new), chars.next()) {
                (Some(l), None) => bits |= 1 << l.index(),
                _ => {
                    return Err(ParseError::Syntax {
                        offset: 0,
                        message: format!("invalid letter '{part}' in set literal"),
                    })
                }
            }
        }
        SymSet::from_bits(bits).ok_or(ParseError::Syntax { offset: 0, message: "empty set literal".into() })
    }
}

impl Ord for SymSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters().cmp(other.letters())
    }
}

impl PartialOrd for SymSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.letters().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SymSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The set of letters a semilattice term mentions.
pub fn sl_sem(e: &SlTerm) -> SymSet {
    fn bits(e: &SlTerm) -> u32 {
        match e {
            SlTerm::Letter(l) => 1 << l.index(),
            SlTerm::Cross(l, r) => bits(l) | bits(r),
        }
    }
    SymSet(bits(e))
}

/// Canonical semilattice term for a letter set: letters in ascending order,
/// combined left-nested.
pub fn pi(a: SymSet) -> SlTerm {
    let mut letters = a.letters();
    let first = SlTerm::Letter(letters.next().expect("SymSet is nonempty"));
    letters.fold(first, |acc, l| SlTerm::cross(acc, SlTerm::Letter(l)))
}

pub fn normalize_sl(e: &SlTerm) -> SlTerm {
    pi(sl_sem(e))
}

pub fn sl_equiv(e: &SlTerm, f: &SlTerm) -> bool {
    sl_sem(e) == sl_sem(f)
}
