//! Synchronous languages cut off at a word-length bound.
//!
//! Every operation discards words longer than the bound. Because
//! concatenation never shortens words and the synchronous product of two
//! words is as long as the longer operand, the words of length `<= n` in a
//! result only ever depend on operand words of length `<= n`. Computing all
//! operands at the same bound is therefore exact.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{LangError, ParseError};
use crate::semilattice::{pi, sl_sem, SymSet};
use crate::syntax::{SlTerm, Term};

/// A synchronous string. The empty sequence is the empty word.
///
/// Ordered shortlex: shorter words first, then lexicographically by symbol.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SyncWord(Vec<SymSet>);

impl SyncWord {
    pub fn empty() -> SyncWord {
        SyncWord(Vec::new())
    }

    pub fn new(symbols: Vec<SymSet>) -> SyncWord {
        SyncWord(symbols)
    }

    pub fn symbols(&self) -> &[SymSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &SyncWord) -> SyncWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        SyncWord(v)
    }

    /// Parses `eps` or a run of set literals such as `{a,b}{c}`.
    pub fn parse(text: &str) -> Result<SyncWord, ParseError> {
        let text = text.trim();
        if text == "eps" || text.is_empty() {
            return Ok(SyncWord::empty());
        }
        let mut symbols = Vec::new();
        let mut rest = text;
        let mut offset = 0;
        while !rest.is_empty() {
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            rest = trimmed;
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('{') {
                return Err(ParseError::Syntax { offset, message: "expected '{' or 'eps'".into() });
            }
            let close =
                rest.find('}').ok_or(ParseError::Syntax { offset, message: "unterminated set literal".into() })?;
            let set = SymSet::parse(&rest[..=close]).map_err(|e| match e {
                ParseError::Syntax { message, .. } => ParseError::Syntax { offset, message },
                other => other,
            })?;
            symbols.push(set);
            offset += close + 1;
            rest = &rest[close + 1..];
        }
        Ok(SyncWord(symbols))
    }
}

impl From<Vec<SymSet>> for SyncWord {
    fn from(v: Vec<SymSet>) -> Self {
        SyncWord(v)
    }
}

impl Ord for SyncWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SyncWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SyncWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SyncWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SyncWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Synchronous product of words: letterwise union, the longer tail survives.
pub fn word_sync(u: &SyncWord, v: &SyncWord) -> SyncWord {
    let (long, short) = if u.len() >= v.len() { (u, v) } else { (v, u) };
    let mut out = long.0.clone();
    for (slot, s) in out.iter_mut().zip(&short.0) {
        *slot = slot.union(*s);
    }
    SyncWord(out)
}

/// A finite set of synchronous strings, each no longer than `bound`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundedLang {
    bound: usize,
    words: BTreeSet<SyncWord>,
}

impl BoundedLang {
    pub fn empty(bound: usize) -> BoundedLang {
        BoundedLang { bound, words: BTreeSet::new() }
    }

    pub fn epsilon(bound: usize) -> BoundedLang {
        BoundedLang::from_words(bound, [SyncWord::empty()])
    }

    /// Keeps only the words that respect the bound.
    pub fn from_words<I: IntoIterator<Item = SyncWord>>(bound: usize, words: I) -> BoundedLang {
        BoundedLang { bound, words: words.into_iter().filter(|w| w.len() <= bound).collect() }
    }

    /// Every word of length `<= bound` over nonempty subsets of `alphabet`.
    pub fn universe(alphabet: SymSet, bound: usize) -> BoundedLang {
        let symbols: Vec<SymSet> = alphabet.subsets().collect();
        let mut words = BTreeSet::new();
        let mut layer = vec![SyncWord::empty()];
        for _ in 0..bound {
            let mut next = Vec::with_capacity(layer.len() * symbols.len());
            for w in &layer {
                for &s in &symbols {
                    let mut v = w.0.clone();
                    v.push(s);
                    next.push(SyncWord(v));
                }
            }
            words.extend(layer);
            layer = next;
        }
        words.extend(layer);
        BoundedLang { bound, words }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn words(&self) -> &BTreeSet<SyncWord> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &SyncWord) -> bool {
        self.words.contains(w)
    }

    /// The words of length `<= m`, as a language with bound `m`.
    pub fn truncate(&self, m: usize) -> BoundedLang {
        BoundedLang { bound: m, words: self.words.iter().filter(|w| w.len() <= m).cloned().collect() }
    }

    fn check(&self, other: &BoundedLang) -> Result<(), LangError> {
        if self.bound == other.bound {
            Ok(())
        } else {
            Err(LangError::BoundMismatch { left: self.bound, right: other.bound })
        }
    }

    pub fn union(&self, other: &BoundedLang) -> Result<BoundedLang, LangError> {
        self.check(other)?;
        Ok(BoundedLang { bound: self.bound, words: &self.words | &other.words })
    }

    pub fn concat(&self, other: &BoundedLang) -> Result<BoundedLang, LangError> {
        self.check(other)?;
        let mut words = BTreeSet::new();
        for u in &self.words {
            let room = self.bound - u.len();
            // shortlex order: lengths are nondecreasing
            for v in other.words.iter().take_while(|v| v.len() <= room) {
                words.insert(u.concat(v));
            }
        }
        Ok(BoundedLang { bound: self.bound, words })
    }

    pub fn sync(&self, other: &BoundedLang) -> Result<BoundedLang, LangError> {
        self.check(other)?;
        let mut words = BTreeSet::new();
        for u in &self.words {
            for v in &other.words {
                words.insert(word_sync(u, v));
            }
        }
        Ok(BoundedLang { bound: self.bound, words })
    }

    /// Least fixed point of `L -> {eps} + K.L` below the bound.
    pub fn star(&self) -> BoundedLang {
        let step: Vec<&SyncWord> = self.words.iter().filter(|w| !w.is_empty()).collect();
        let mut words: BTreeSet<SyncWord> = BTreeSet::from([SyncWord::empty()]);
        let mut frontier = vec![SyncWord::empty()];
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            for k in &step {
                for w in &frontier {
                    if k.len() + w.len() <= self.bound {
                        let kw = k.concat(w);
                        if !words.contains(&kw) {
                            words.insert(kw.clone());
                            fresh.push(kw);
                        }
                    }
                }
            }
            frontier = fresh;
        }
        BoundedLang { bound: self.bound, words }
    }

    /// Intersection with `{eps}`.
    pub fn h(&self) -> BoundedLang {
        BoundedLang { bound: self.bound, words: self.words.iter().filter(|w| w.is_empty()).cloned().collect() }
    }

    pub fn is_subset(&self, other: &BoundedLang) -> bool {
        self.words.is_subset(&other.words)
    }
}

impl fmt::Display for BoundedLang {
    /// One word per line, in shortlex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.words {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

pub fn lang_union(k: &BoundedLang, l: &BoundedLang) -> Result<BoundedLang, LangError> {
    k.union(l)
}

pub fn lang_concat(k: &BoundedLang, l: &BoundedLang) -> Result<BoundedLang, LangError> {
    k.concat(l)
}

pub fn lang_sync(k: &BoundedLang, l: &BoundedLang) -> Result<BoundedLang, LangError> {
    k.sync(l)
}

pub fn lang_star(k: &BoundedLang) -> BoundedLang {
    k.star()
}

pub fn lang_h(k: &BoundedLang) -> BoundedLang {
    k.h()
}

/// The words of the term's language of length at most `n`.
pub fn sem_bounded(t: &Term, n: usize) -> BoundedLang {
    let same = "operands are computed at a common bound";
    match t {
        Term::Zero => BoundedLang::empty(n),
        Term::One => BoundedLang::epsilon(n),
        Term::Atom(sl) => BoundedLang::from_words(n, [SyncWord(vec![sl_sem(sl)])]),
        Term::Plus(l, r) => sem_bounded(l, n).union(&sem_bounded(r, n)).expect(same),
        Term::Seq(l, r) => {
            let left = sem_bounded(l, n);
            if left.is_empty() {
                return left;
            }
            left.concat(&sem_bounded(r, n)).expect(same)
        }
        Term::Sync(l, r) => {
            let left = sem_bounded(l, n);
            if left.is_empty() {
                return left;
            }
            left.sync(&sem_bounded(r, n)).expect(same)
        }
        Term::Star(e) => sem_bounded(e, n).star(),
        Term::H(e) => sem_bounded(e, n).h(),
    }
}

/// Letterwise `pi`: the sequence of canonical atoms spelling the word.
pub fn pi_word(w: &SyncWord) -> Vec<SlTerm> {
    w.symbols().iter().map(|&s| pi(s)).collect()
}

pub fn pi_lang(l: &BoundedLang) -> BTreeSet<Vec<SlTerm>> {
    l.words().iter().map(pi_word).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use proptest::prelude::*;

    fn w(s: &str) -> SyncWord {
        SyncWord::parse(s).unwrap()
    }

    fn lang(n: usize, ws: &[&str]) -> BoundedLang {
        BoundedLang::from_words(n, ws.iter().map(|s| w(s)))
    }

    fn sem(s: &str, n: usize) -> BoundedLang {
        sem_bounded(&parse_term(s).unwrap(), n)
    }

    #[test]
    fn word_sync_examples() {
        assert_eq!(word_sync(&w("{a}{b}"), &w("{c}")), w("{a,c}{b}"));
        assert_eq!(word_sync(&w("eps"), &w("{a}{b}")), w("{a}{b}"));
        assert_eq!(word_sync(&w("{a}"), &w("{a}")), w("{a}"));
    }

    #[test]
    fn word_parse_and_print() {
        assert_eq!(w("{b,a}{c}").to_string(), "{a,b}{c}");
        assert_eq!(w("eps").to_string(), "eps");
        assert_eq!(w(" {a} {b} ").len(), 2);
        assert!(SyncWord::parse("{a}x").is_err());
        assert!(SyncWord::parse("{a").is_err());
    }

    #[test]
    fn language_operation_examples() {
        let k = lang(3, &["{a}{b}"]);
        let l = lang(3, &["{c}"]);
        assert_eq!(k.sync(&l).unwrap(), lang(3, &["{a,c}{b}"]));
        assert_eq!(lang(2, &["{a}"]).star(), lang(2, &["eps", "{a}", "{a}{a}"]));
        assert_eq!(lang(2, &["eps", "{a}"]).h(), lang(2, &["eps"]));
        assert_eq!(k.union(&lang(2, &[])), Err(LangError::BoundMismatch { left: 3, right: 2 }));
    }

    #[test]
    fn star_of_epsilon_terminates() {
        assert_eq!(BoundedLang::epsilon(5).star(), BoundedLang::epsilon(5));
        assert_eq!(BoundedLang::empty(5).star(), BoundedLang::epsilon(5));
    }

    #[test]
    fn sem_bounded_examples() {
        assert_eq!(sem("a ; b", 2), lang(2, &["{a}{b}"]));
        let doubled = sem("(a+b)* & (a+b)*", 1);
        assert!(doubled.contains(&w("{a,b}")));
        assert!(!sem("(a+b)*", 1).contains(&w("{a,b}")));
        let expected = lang(3, &["eps", "{a}", "{a}{a}", "{a}{a}{a}"]);
        assert_eq!(sem("a* & a*", 3), expected);
        assert_eq!(sem("a*", 3), expected);
        assert_eq!(sem("H(a + 1) ; b", 2), lang(2, &["{b}"]));
        assert_eq!(sem("[b & a]", 2), lang(2, &["{a,b}"]));
    }

    #[test]
    fn display_one_word_per_line() {
        let l = lang(2, &["{b}", "{a}{a}", "eps", "{a}"]);
        assert_eq!(l.to_string(), "eps\n{a}\n{b}\n{a}{a}\n");
    }

    #[test]
    fn universe_size() {
        // 3 symbols over {a,b}: 1 + 3 + 9
        assert_eq!(BoundedLang::universe(SymSet::of("ab"), 2).len(), 13);
    }

    #[test]
    fn pi_word_examples() {
        let p = pi_word(&w("{a,b}{c}"));
        assert_eq!(p, vec![SlTerm::cross(SlTerm::letter('a'), SlTerm::letter('b')), SlTerm::letter('c')]);
        assert!(pi_word(&SyncWord::empty()).is_empty());
    }

    fn arb_word() -> impl Strategy<Value = SyncWord> {
        prop::collection::vec((1u32..8).prop_map(|b| SymSet::from_bits(b).unwrap()), 0..5).prop_map(SyncWord::new)
    }

    proptest! {
        #[test]
        fn word_sync_laws(u in arb_word(), v in arb_word(), x in arb_word()) {
            prop_assert_eq!(word_sync(&u, &v), word_sync(&v, &u));
            prop_assert_eq!(
                word_sync(&u, &word_sync(&v, &x)),
                word_sync(&word_sync(&u, &v), &x)
            );
            prop_assert_eq!(word_sync(&u, &SyncWord::empty()), u.clone());
            prop_assert_eq!(word_sync(&u, &v).len(), u.len().max(v.len()));
        }

        #[test]
        fn truncation_coheres(words in prop::collection::vec(arb_word(), 0..6), m in 0usize..4) {
            let k = BoundedLang::from_words(4, words);
            let direct = BoundedLang::from_words(m, k.words().iter().cloned());
            prop_assert_eq!(k.truncate(m), direct.clone());
            prop_assert_eq!(k.star().truncate(m), direct.star());
            prop_assert_eq!(
                k.sync(&k).unwrap().truncate(m),
                direct.sync(&direct).unwrap()
            );
            prop_assert_eq!(
                k.concat(&k).unwrap().truncate(m),
                direct.concat(&direct).unwrap()
            );
        }
    }
}
