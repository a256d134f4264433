//! Partial derivatives of SF1 terms and the syntactic automaton.
//!
//! `delta(t, A)` is empty unless every letter of `A` occurs in `t`: a letter
//! atom only steps on its own singleton, and every other constructor builds
//! its step sets from those of its subterms by union. Transition tables are
//! therefore indexed by nonempty subsets of the term's support only.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::language::SyncWord;
use crate::semilattice::{pi, sl_sem, SymSet};
use crate::syntax::Term;

/// Supports above this many letters make the subset-indexed tables large.
pub const SUPPORT_WARN_LETTERS: usize = 8;

/// Derivatives of one term, keyed by the consumed letter set. Only nonempty
/// entries are stored.
pub type DerivTable = BTreeMap<SymSet, BTreeSet<Term>>;

/// Termination map: whether the empty word is in the language.
pub fn out(t: &Term) -> bool {
    match t {
        Term::Zero | Term::Atom(_) => false,
        Term::One | Term::Star(_) => true,
        Term::Plus(l, r) => out(l) || out(r),
        Term::Seq(l, r) | Term::Sync(l, r) => out(l) && out(r),
        Term::H(e) => out(e),
    }
}

/// `delta(e, A)` when `partner` terminates, otherwise nothing.
fn guarded(e: &Term, partner: &Term, a: SymSet) -> BTreeSet<Term> {
    if out(partner) {
        delta(e, a)
    } else {
        BTreeSet::new()
    }
}

/// Continuation map: the terms reached from `t` by one `A`-step.
pub fn delta(t: &Term, a: SymSet) -> BTreeSet<Term> {
    match t {
        Term::Zero | Term::One | Term::H(_) => BTreeSet::new(),
        Term::Atom(sl) => {
            if sl_sem(sl) == a {
                BTreeSet::from([Term::One])
            } else {
                BTreeSet::new()
            }
        }
        Term::Plus(l, r) => {
            let mut s = delta(l, a);
            s.extend(delta(r, a));
            s
        }
        Term::Seq(l, r) => {
            let mut s: BTreeSet<Term> = delta(l, a).into_iter().map(|d| Term::seq(d, (**r).clone())).collect();
            s.extend(guarded(r, l, a));
            s
        }
        Term::Star(e) => delta(e, a).into_iter().map(|d| Term::seq(d, t.clone())).collect(),
        Term::Sync(l, r) => {
            let mut s = guarded(l, r, a);
            s.extend(guarded(r, l, a));
            // ordered pairs (B1, B2) of nonempty sets with B1 | B2 = A
            for b1 in a.subsets() {
                let left = delta(l, b1);
                if left.is_empty() {
                    continue;
                }
                let rest = a.bits() & !b1.bits();
                let mut extra = Some(0u32);
                while let Some(e) = extra {
                    if let Some(b2) = SymSet::from_bits(rest | e) {
                        for dr in delta(r, b2) {
                            for dl in &left {
                                s.insert(Term::sync(dl.clone(), dr.clone()));
                            }
                        }
                    }
                    // next submask of b1 (ascending), stop after b1 itself
                    extra = if e == b1.bits() { None } else { Some(e.wrapping_sub(b1.bits()) & b1.bits()) };
                }
            }
            s
        }
    }
}

/// All nonempty derivative sets of `t` at once, computed bottom-up.
///
/// Agrees with `delta(t, A)` for every `A`; used to build automata without
/// re-deriving subterms once per letter set.
pub fn derivatives(t: &Term) -> DerivTable {
    fn merge(into: &mut DerivTable, from: DerivTable) {
        for (a, set) in from {
            into.entry(a).or_default().extend(set);
        }
    }
    match t {
        Term::Zero | Term::One | Term::H(_) => DerivTable::new(),
        Term::Atom(sl) => DerivTable::from([(sl_sem(sl), BTreeSet::from([Term::One]))]),
        Term::Plus(l, r) => {
            let mut table = derivatives(l);
            merge(&mut table, derivatives(r));
            table
        }
        Term::Seq(l, r) => {
            let mut table: DerivTable = derivatives(l)
                .into_iter()
                .map(|(a, set)| (a, set.into_iter().map(|d| Term::seq(d, (**r).clone())).collect()))
                .collect();
            if out(l) {
                merge(&mut table, derivatives(r));
            }
            table
        }
        Term::Star(e) => derivatives(e)
            .into_iter()
            .map(|(a, set)| (a, set.into_iter().map(|d| Term::seq(d, t.clone())).collect()))
            .collect(),
        Term::Sync(l, r) => {
            let left = derivatives(l);
            let right = derivatives(r);
            let mut table = DerivTable::new();
            for (b1, dls) in &left {
                for (b2, drs) in &right {
                    let entry = table.entry(b1.union(*b2)).or_default();
                    for dl in dls {
                        for dr in drs {
                            entry.insert(Term::sync(dl.clone(), dr.clone()));
                        }
                    }
                }
            }
            if out(r) {
                merge(&mut table, left);
            }
            if out(l) {
                merge(&mut table, right);
            }
            table
        }
    }
}

/// The reach function: a finite superset of every term reachable by
/// iterated derivatives. `t` itself is not always a member.
pub fn reach(t: &Term) -> BTreeSet<Term> {
    match t {
        Term::Zero => BTreeSet::new(),
        Term::One | Term::H(_) => BTreeSet::from([Term::One]),
        Term::Atom(_) => BTreeSet::from([Term::One, t.clone()]),
        Term::Plus(l, r) => {
            let mut s = reach(l);
            s.extend(reach(r));
            s
        }
        Term::Seq(l, r) => {
            let mut s: BTreeSet<Term> = reach(l).into_iter().map(|d| Term::seq(d, (**r).clone())).collect();
            s.extend(reach(r));
            s
        }
        Term::Star(e) => {
            let mut s: BTreeSet<Term> = reach(e).into_iter().map(|d| Term::seq(d, t.clone())).collect();
            s.insert(Term::One);
            s
        }
        Term::Sync(l, r) => {
            let rl = reach(l);
            let rr = reach(r);
            let mut s = BTreeSet::new();
            for dl in &rl {
                for dr in &rr {
                    s.insert(Term::sync(dl.clone(), dr.clone()));
                }
            }
            s.extend(rl);
            s.extend(rr);
            s
        }
    }
}

/// The syntactic automaton restricted to `reach(t) + {t}`.
///
/// States are terms compared structurally; state 0 is the initial term.
#[derive(Clone, Debug)]
pub struct Automaton {
    states: Vec<Term>,
    index: HashMap<Term, usize>,
    accepting: Vec<bool>,
    transitions: Vec<BTreeMap<SymSet, Vec<usize>>>,
    alphabet: Option<SymSet>,
}

pub fn build_automaton(t: &Term) -> Automaton {
    let alphabet = t.support();
    if let Some(a) = alphabet {
        if a.len() > SUPPORT_WARN_LETTERS {
            log::warn!(
                "term mentions {} letters; derivative tables range over {} letter sets",
                a.len(),
                (1u64 << a.len()) - 1
            );
        }
    }
    let mut states = vec![t.clone()];
    states.extend(reach(t).into_iter().filter(|q| q != t));
    let index: HashMap<Term, usize> = states.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
    let accepting = states.iter().map(out).collect();
    let transitions = states
        .iter()
        .map(|q| {
            derivatives(q)
                .into_iter()
                .map(|(a, targets)| {
                    debug_assert!(alphabet.is_some_and(|s| a.is_subset(s)));
                    let ids = targets
                        .iter()
                        .map(|d| *index.get(d).unwrap_or_else(|| panic!("derivative {d} of {q} escapes reach({t})")))
                        .collect();
                    (a, ids)
                })
                .collect()
        })
        .collect();
    Automaton { states, index, accepting, transitions, alphabet }
}

impl Automaton {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn states(&self) -> &[Term] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    /// Letters of the initial term; transitions use subsets of these only.
    pub fn alphabet(&self) -> Option<SymSet> {
        self.alphabet
    }

    pub fn successors(&self, q: usize, a: SymSet) -> &[usize] {
        self.transitions[q].get(&a).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn transitions(&self, q: usize) -> &BTreeMap<SymSet, Vec<usize>> {
        &self.transitions[q]
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().flat_map(|m| m.values()).map(Vec::len).sum()
    }

    /// Sorted, deduplicated successor set of a set of states.
    pub fn step_set(&self, from: &[usize], a: SymSet) -> Vec<usize> {
        let mut next: Vec<usize> = from.iter().flat_map(|&q| self.successors(q, a)).copied().collect();
        next.sort_unstable();
        next.dedup();
        next
    }

    pub fn any_accepting(&self, set: &[usize]) -> bool {
        set.iter().any(|&q| self.accepting[q])
    }

    pub fn accepts(&self, w: &SyncWord) -> bool {
        let mut current = vec![self.initial()];
        for &a in w.symbols() {
            current = self.step_set(&current, a);
            if current.is_empty() {
                return false;
            }
        }
        self.any_accepting(&current)
    }

    /// Graphviz rendering: states labelled with their terms, accepting
    /// states double-circled, edges labelled with letter sets.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  __start [shape=point];\n");
        for (i, q) in self.states.iter().enumerate() {
            let shape = if self.accepting[i] { "doublecircle" } else { "circle" };
            let label = q.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(s, "  q{i} [shape={shape}, label=\"{label}\"];");
        }
        let _ = writeln!(s, "  __start -> q{};", self.initial());
        for (i, row) in self.transitions.iter().enumerate() {
            for (a, targets) in row {
                for j in targets {
                    let _ = writeln!(s, "  q{i} -> q{j} [label=\"{a}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// One-step unfolding `o(t) + sum over A of pi(A) ; t'` for `t'` in
/// `delta(t, A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unfold {
    pub accepts_empty: bool,
    /// Sorted by letter set, then by printed term.
    pub summands: Vec<(SymSet, Term)>,
}

impl Unfold {
    pub fn to_term(&self) -> Term {
        let head = if self.accepts_empty { Term::One } else { Term::Zero };
        let tail = self.summands.iter().map(|(a, d)| Term::seq(Term::atom(pi(*a)), d.clone()));
        Term::sum(std::iter::once(head).chain(tail))
    }
}

pub fn fundamental_unfold(t: &Term) -> Unfold {
    let mut summands: Vec<(SymSet, String, Term)> =
        derivatives(t).into_iter().flat_map(|(a, set)| set.into_iter().map(move |d| (a, d.to_string(), d))).collect();
    summands.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    Unfold { accepts_empty: out(t), summands: summands.into_iter().map(|(a, _, d)| (a, d)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::sem_bounded;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Term> {
        items.iter().map(|s| t(s)).collect()
    }

    #[test]
    fn out_examples() {
        assert!(out(&t("a*")));
        assert!(!out(&t("H(a)")));
        assert!(!out(&t("(1 + a) ; a")));
        assert!(out(&t("H(1) & a*")));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&t("a"), SymSet::of("a")), set(&["1"]));
        assert_eq!(delta(&t("a"), SymSet::of("ab")), set(&[]));
        assert_eq!(delta(&t("a & b"), SymSet::of("ab")), set(&["1 & 1"]));
        assert_eq!(delta(&t("a & b"), SymSet::of("a")), set(&[]));
        assert_eq!(delta(&t("H(a*)"), SymSet::of("a")), set(&[]));
        assert_eq!(delta(&t("[b & a]"), SymSet::of("ab")), set(&["1"]));
    }

    #[test]
    fn delta_guards() {
        // a* terminates, so b may step alone on the right of the product
        assert_eq!(delta(&t("a* & b"), SymSet::of("b")), set(&["1"]));
        assert_eq!(delta(&t("a* ; b"), SymSet::of("b")), set(&["1"]));
        assert_eq!(delta(&t("a ; b"), SymSet::of("b")), set(&[]));
    }

    #[test]
    fn reach_examples() {
        assert_eq!(reach(&t("a")), set(&["1", "a"]));
        assert_eq!(reach(&t("H(a ; b)")), set(&["1"]));
        assert_eq!(reach(&t("a*")), set(&["1", "1 ; a*", "a ; a*"]));
        assert_eq!(reach(&t("0")), set(&[]));
    }

    #[test]
    fn table_agrees_with_delta() {
        for s in ["(a + b)* & (a ; b)*", "H(a) & b* ; (a & b)", "(a & b*)* ; [a & c]", "a* & (b & c)*"] {
            let e = t(s);
            let table = derivatives(&e);
            for a in e.support().unwrap().subsets() {
                let direct = delta(&e, a);
                let tabled = table.get(&a).cloned().unwrap_or_default();
                assert_eq!(direct, tabled, "term {s}, letters {a}");
            }
        }
    }

    #[test]
    fn automaton_of_zero() {
        let aut = build_automaton(&Term::Zero);
        assert_eq!(aut.len(), 1);
        assert_eq!(aut.transition_count(), 0);
        assert!(!aut.is_accepting(0));
    }

    #[test]
    fn automaton_of_letter() {
        let aut = build_automaton(&t("a"));
        assert_eq!(aut.states(), &[t("a"), t("1")]);
        assert_eq!(aut.successors(0, SymSet::of("a")), &[1]);
        assert!(aut.is_accepting(1));
        assert!(!aut.is_accepting(0));
    }

    #[test]
    fn automaton_state_bound() {
        let e = t("(a+b)* & (a+b)*");
        assert!(build_automaton(&e).len() <= reach(&e).len() + 1);
    }

    #[test]
    fn acceptance_examples() {
        let w = |s: &str| SyncWord::parse(s).unwrap();
        assert!(build_automaton(&t("a & b")).accepts(&w("{a,b}")));
        assert!(!build_automaton(&t("a")).accepts(&w("eps")));
        assert!(build_automaton(&t("a* & a*")).accepts(&w("{a}{a}{a}")));
        assert!(!build_automaton(&t("a* & a*")).accepts(&w("{b}")));
    }

    #[test]
    fn unfold_examples() {
        assert_eq!(fundamental_unfold(&t("1")), Unfold { accepts_empty: true, summands: vec![] });
        assert_eq!(
            fundamental_unfold(&t("a")),
            Unfold { accepts_empty: false, summands: vec![(SymSet::of("a"), t("1"))] }
        );
        assert_eq!(
            fundamental_unfold(&t("a & b")),
            Unfold { accepts_empty: false, summands: vec![(SymSet::of("ab"), t("1 & 1"))] }
        );
        assert_eq!(fundamental_unfold(&t("a & b")).to_term(), t("0 + [a & b] ; (1 & 1)"));
    }

    #[test]
    fn unfold_is_sorted() {
        let u = fundamental_unfold(&t("b ; a + a ; b + [a & b] + a*"));
        let keys: Vec<(SymSet, String)> = u.summands.iter().map(|(a, d)| (*a, d.to_string())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(sem_bounded(&u.to_term(), 3), sem_bounded(&t("b ; a + a ; b + [a & b] + a*"), 3));
    }

    #[test]
    fn dot_export_marks_accepting_states() {
        let dot = build_automaton(&t("a ; b")).to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("label=\"{a}\""));
        assert!(dot.contains("label=\"a ; b\""));
    }
}
