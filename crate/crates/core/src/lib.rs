//! Synchronous Kleene algebra: terms, their synchronous-word semantics,
//! syntactic derivatives, an equivalence decision procedure, normal forms
//! and the countermodel separating SKA from SF1.

pub mod axioms;
pub mod checks;
pub mod countermodel;
pub mod derivatives;
pub mod equivalence;
pub mod error;
pub mod gen;
pub mod language;
pub mod normalform;
pub mod semilattice;
pub mod syntax;

pub use countermodel::{eval_cm, standard_valuation, ModelElement, UnaryLang, Valuation};
pub use derivatives::{build_automaton, delta, derivatives, fundamental_unfold, out, reach, Automaton, Unfold};
pub use equivalence::{equiv, equiv_with_cap, member, EquivResult, DEFAULT_PAIR_CAP};
pub use error::{CountermodelError, EquivError, LangError, ParseError, SolveError};
pub use language::{sem_bounded, word_sync, BoundedLang, SyncWord};
pub use normalform::{build_system, solve, to_normal_form, LinSystem, Solution};
pub use semilattice::{normalize_sl, pi, sl_equiv, sl_sem, SymSet};
pub use syntax::{
    classify, is_nsf, parse_alphabet, parse_term, parse_term_in, print_term, Fragments, Letter, SlTerm, Term,
};
