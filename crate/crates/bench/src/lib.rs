//! Inputs shared by the benchmarks.

use synka::{parse_term, Term};

/// Pairs of terms, equivalent or not, in rising difficulty.
pub const EQUIV_PAIRS: &[(&str, &str, &str)] = &[
    ("idempotent-star", "a* & a*", "a*"),
    ("sum-star", "(a + b)* & (a + b)*", "(a + b)*"),
    ("sliding", "(a ; b)* ; a", "a ; (b ; a)*"),
    ("denesting", "(a + b)*", "a* ; (b ; a*)*"),
    ("three-way", "(a + b + c)* & (a ; b)*", "(a ; b)* & (a + b + c)*"),
    ("nested-sync", "((a + b)* & c*) ; (a & b)*", "(c* & (b + a)*) ; (b & a)*"),
];

pub fn term(text: &str) -> Term {
    parse_term(text).expect("benchmark terms parse")
}
