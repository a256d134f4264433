//! Deciding language equality of two terms.
//!
//! Both syntactic automata are determinized on the fly and explored in
//! lock step, breadth first. Pairs of determinized states are merged in a
//! union-find structure; a pair whose components are already in the same
//! class is skipped (Hopcroft-Karp). The first pair that disagrees on
//! acceptance yields the witness.
//!
//! The comparison alphabet is every nonempty subset of the union of both
//! supports. Any letter set mentioning another letter has no derivative in
//! either term, so neither automaton can accept a word that uses it.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::derivatives::{build_automaton, delta, out, Automaton};
use crate::error::EquivError;
use crate::language::SyncWord;
use crate::semilattice::SymSet;
use crate::syntax::Term;

pub const DEFAULT_PAIR_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivResult {
    pub equivalent: bool,
    /// A distinguishing word, present iff the terms differ.
    pub witness: Option<SyncWord>,
}

pub fn equiv(e: &Term, f: &Term) -> Result<EquivResult, EquivError> {
    equiv_with_cap(e, f, DEFAULT_PAIR_CAP)
}

pub fn equiv_with_cap(e: &Term, f: &Term, cap: usize) -> Result<EquivResult, EquivError> {
    let left = build_automaton(e);
    let right = build_automaton(f);
    equiv_automata(&left, &right, cap)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Interns determinized states of both automata into one id space.
struct Macros {
    ids: HashMap<(bool, Vec<usize>), usize>,
    uf: UnionFind,
}

impl Macros {
    fn id(&mut self, side: bool, set: Vec<usize>) -> usize {
        if let Some(&id) = self.ids.get(&(side, set.clone())) {
            return id;
        }
        let id = self.uf.add();
        self.ids.insert((side, set), id);
        id
    }
}

struct Visit {
    left: Vec<usize>,
    right: Vec<usize>,
    via: Option<(usize, SymSet)>,
}

pub fn equiv_automata(left: &Automaton, right: &Automaton, cap: usize) -> Result<EquivResult, EquivError> {
    let letters = left.alphabet().map_or(0, SymSet::bits) | right.alphabet().map_or(0, SymSet::bits);
    let alphabet: Vec<SymSet> = SymSet::from_bits(letters).map(|s| s.subsets().collect()).unwrap_or_default();

    let mut macros = Macros { ids: HashMap::new(), uf: UnionFind { parent: Vec::new() } };
    let mut visits: Vec<Visit> = vec![Visit { left: vec![left.initial()], right: vec![right.initial()], via: None }];
    let mut queue = VecDeque::from([0usize]);

    while let Some(v) = queue.pop_front() {
        let (l, r) = (visits[v].left.clone(), visits[v].right.clone());
        let li = macros.id(false, l.clone());
        let ri = macros.id(true, r.clone());
        if macros.uf.find(li) == macros.uf.find(ri) {
            continue;
        }
        if left.any_accepting(&l) != right.any_accepting(&r) {
            return Ok(EquivResult { equivalent: false, witness: Some(trace(&visits, v)) });
        }
        macros.uf.union(li, ri);
        for &a in &alphabet {
            let nl = left.step_set(&l, a);
            let nr = right.step_set(&r, a);
            if nl.is_empty() && nr.is_empty() {
                continue;
            }
            if visits.len() >= cap {
                return Err(EquivError::ResourceLimit { cap });
            }
            visits.push(Visit { left: nl, right: nr, via: Some((v, a)) });
            queue.push_back(visits.len() - 1);
        }
    }
    Ok(EquivResult { equivalent: true, witness: None })
}

fn trace(visits: &[Visit], mut v: usize) -> SyncWord {
    let mut symbols = Vec::new();
    while let Some((parent, a)) = visits[v].via {
        symbols.push(a);
        v = parent;
    }
    symbols.reverse();
    SyncWord::new(symbols)
}

/// Word membership by iterated derivatives, without building an automaton.
pub fn member(w: &SyncWord, e: &Term) -> bool {
    let mut current = vec![e.clone()];
    for &a in w.symbols() {
        let mut next: Vec<Term> = current.iter().flat_map(|t| delta(t, a)).collect();
        next.sort();
        next.dedup();
        if next.is_empty() {
            return false;
        }
        current = next;
    }
    current.iter().any(out)
}
