//! Brute-force reference implementations used to cross-check the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use synka::{build_automaton, Automaton, SymSet, SyncWord, Term, UnaryLang};

/// A complete DFA from the subset construction over every reachable subset.
pub struct Dfa {
    pub accepting: Vec<bool>,
    /// `delta[q][i]` for the i-th symbol of the alphabet it was built over.
    pub delta: Vec<Vec<usize>>,
}

pub fn determinize(aut: &Automaton, symbols: &[SymSet]) -> Dfa {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let start = vec![aut.initial()];
    ids.insert(start.clone(), 0);
    sets.push(start);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut q = 0;
    while q < sets.len() {
        let mut row = Vec::with_capacity(symbols.len());
        for &a in symbols {
            let mut next: Vec<usize> = sets[q].iter().flat_map(|&s| aut.successors(s, a).iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                sets.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
        q += 1;
    }
    let accepting = sets.iter().map(|s| s.iter().any(|&q| aut.is_accepting(q))).collect();
    Dfa { accepting, delta }
}

fn joint_symbols(e: &Term, f: &Term) -> Vec<SymSet> {
    let bits = e.support().map_or(0, SymSet::bits) | f.support().map_or(0, SymSet::bits);
    SymSet::from_bits(bits).map(|s| s.subsets().collect()).unwrap_or_default()
}

/// A shortest word in exactly one of the two languages, or `None` if they
/// are equal. Breadth-first search of the full product of both DFAs.
pub fn oracle_witness(e: &Term, f: &Term) -> Option<SyncWord> {
    let symbols = joint_symbols(e, f);
    let (l, r) = (determinize(&build_automaton(e), &symbols), determinize(&build_automaton(f), &symbols));
    type Pair = (usize, usize);
    let mut parent: BTreeMap<Pair, Option<(Pair, SymSet)>> = BTreeMap::new();
    let mut queue = VecDeque::from([(0, 0)]);
    parent.insert((0, 0), None);
    while let Some((p, q)) = queue.pop_front() {
        if l.accepting[p] != r.accepting[q] {
            let mut word = Vec::new();
            let mut at = (p, q);
            while let Some(Some((prev, a))) = parent.get(&at) {
                word.push(*a);
                at = *prev;
            }
            word.reverse();
            return Some(SyncWord::new(word));
        }
        for (i, &a) in symbols.iter().enumerate() {
            let next = (l.delta[p][i], r.delta[q][i]);
            if let std::collections::btree_map::Entry::Vacant(slot) = parent.entry(next) {
                slot.insert(Some(((p, q), a)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Truncated model of a unary language: membership of `0..N`.
pub const HORIZON: usize = 48;

pub fn lengths(l: &UnaryLang) -> Vec<bool> {
    (0..HORIZON).map(|n| l.contains(n)).collect()
}

pub fn union(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

pub fn sum(a: &[bool], b: &[bool]) -> Vec<bool> {
    (0..HORIZON).map(|n| (0..=n).any(|i| a[i] && b[n - i])).collect()
}

pub fn max(a: &[bool], b: &[bool]) -> Vec<bool> {
    let below = |s: &[bool], n: usize| (0..=n).any(|i| s[i]);
    (0..HORIZON).map(|n| (a[n] && below(b, n)) || (b[n] && below(a, n))).collect()
}

pub fn star(a: &[bool]) -> Vec<bool> {
    let mut out = vec![false; HORIZON];
    out[0] = true;
    for n in 1..HORIZON {
        out[n] = (1..=n).any(|i| a[i] && out[n - i]);
    }
    out
}
