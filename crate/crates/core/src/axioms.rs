//! The equational axioms of SKA and SF1 as term schemas, and the three
//! fixpoint implications.

use crate::syntax::Term;

/// Substitution for the schema variables. `alpha` and `beta` must be
/// semilattice atoms.
#[derive(Clone, Debug)]
pub struct Vars {
    pub e: Term,
    pub f: Term,
    pub g: Term,
    pub alpha: Term,
    pub beta: Term,
}

#[derive(Clone, Copy, Debug)]
pub struct EquationSchema {
    pub name: &'static str,
    pub in_ska: bool,
    pub in_sf1: bool,
    build: fn(&Vars) -> (Term, Term),
}

impl EquationSchema {
    pub fn instantiate(&self, v: &Vars) -> (Term, Term) {
        (self.build)(v)
    }
}

use Term as T;

fn c(t: &Term) -> Term {
    t.clone()
}

macro_rules! schema {
    ($name:literal, $ska:expr, $sf1:expr, |$v:ident| $body:expr) => {
        EquationSchema { name: $name, in_ska: $ska, in_sf1: $sf1, build: |$v: &Vars| $body }
    };
}

pub const EQUATIONS: &[EquationSchema] = &[
    schema!("plus-assoc", true, true, |v| (
        T::plus(c(&v.e), T::plus(c(&v.f), c(&v.g))),
        T::plus(T::plus(c(&v.e), c(&v.f)), c(&v.g))
    )),
    schema!("plus-comm", true, true, |v| (T::plus(c(&v.e), c(&v.f)), T::plus(c(&v.f), c(&v.e)))),
    schema!("plus-zero", true, true, |v| (T::plus(c(&v.e), T::Zero), c(&v.e))),
    schema!("plus-idem", true, true, |v| (T::plus(c(&v.e), c(&v.e)), c(&v.e))),
    schema!("seq-assoc", true, true, |v| (
        T::seq(c(&v.e), T::seq(c(&v.f), c(&v.g))),
        T::seq(T::seq(c(&v.e), c(&v.f)), c(&v.g))
    )),
    schema!("seq-one-right", true, true, |v| (T::seq(c(&v.e), T::One), c(&v.e))),
    schema!("seq-one-left", true, true, |v| (T::seq(T::One, c(&v.e)), c(&v.e))),
    schema!("seq-zero-right", true, true, |v| (T::seq(c(&v.e), T::Zero), T::Zero)),
    schema!("seq-zero-left", true, true, |v| (T::seq(T::Zero, c(&v.e)), T::Zero)),
    schema!("dist-left", true, true, |v| (
        T::seq(c(&v.e), T::plus(c(&v.f), c(&v.g))),
        T::plus(T::seq(c(&v.e), c(&v.f)), T::seq(c(&v.e), c(&v.g)))
    )),
    schema!("dist-right", true, true, |v| (
        T::seq(T::plus(c(&v.e), c(&v.f)), c(&v.g)),
        T::plus(T::seq(c(&v.e), c(&v.g)), T::seq(c(&v.f), c(&v.g)))
    )),
    schema!("star-unfold-left", true, true, |v| (T::star(c(&v.e)), T::plus(T::One, T::seq(c(&v.e), T::star(c(&v.e)))))),
    schema!("star-unfold-right", true, true, |v| (
        T::star(c(&v.e)),
        T::plus(T::One, T::seq(T::star(c(&v.e)), c(&v.e)))
    )),
    schema!("sync-dist", true, true, |v| (
        T::sync(c(&v.e), T::plus(c(&v.f), c(&v.g))),
        T::plus(T::sync(c(&v.e), c(&v.f)), T::sync(c(&v.e), c(&v.g)))
    )),
    schema!("sync-assoc", true, true, |v| (
        T::sync(c(&v.e), T::sync(c(&v.f), c(&v.g))),
        T::sync(T::sync(c(&v.e), c(&v.f)), c(&v.g))
    )),
    schema!("sync-zero", true, true, |v| (T::sync(c(&v.e), T::Zero), T::Zero)),
    schema!("synchrony", true, true, |v| (
        T::sync(T::seq(c(&v.alpha), c(&v.e)), T::seq(c(&v.beta), c(&v.f))),
        T::seq(T::sync(c(&v.alpha), c(&v.beta)), T::sync(c(&v.e), c(&v.f)))
    )),
    schema!("sync-comm", true, true, |v| (T::sync(c(&v.e), c(&v.f)), T::sync(c(&v.f), c(&v.e)))),
    schema!("sync-one", true, true, |v| (T::sync(c(&v.e), T::One), c(&v.e))),
    schema!("semilattice-idem", true, true, |v| (T::sync(c(&v.alpha), c(&v.alpha)), c(&v.alpha))),
    schema!("loop-tightening", false, true, |v| (T::star(T::plus(c(&v.e), T::One)), T::star(c(&v.e)))),
    schema!("h-zero", false, true, |_v| (T::h(T::Zero), T::Zero)),
    schema!("h-one", false, true, |_v| (T::h(T::One), T::One)),
    schema!("h-plus", false, true, |v| (T::h(T::plus(c(&v.e), c(&v.f))), T::plus(T::h(c(&v.e)), T::h(c(&v.f))))),
    schema!("h-seq", false, true, |v| (T::h(T::seq(c(&v.e), c(&v.f))), T::seq(T::h(c(&v.e)), T::h(c(&v.f))))),
    schema!("h-star", false, true, |v| (T::h(T::star(c(&v.e))), T::star(T::h(c(&v.e))))),
    schema!("h-sync", false, true, |v| (T::h(T::sync(c(&v.e), c(&v.f))), T::sync(T::h(c(&v.e)), T::h(c(&v.f))))),
    schema!("h-atom", false, true, |v| (T::h(c(&v.alpha)), T::Zero)),
];

/// Quasi-equations `hypothesis => conclusion`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Implication {
    /// `e + f;g <= g  =>  f*;e <= g`
    LeastFixpointLeft,
    /// `e + g;f <= g  =>  e;f* <= g`
    LeastFixpointRight,
    /// `H(f) = 0 and e + f;g = g  =>  f*;e = g`
    UniqueFixpoint,
}

/// `x <= y` as the equation `x + y = y`.
pub fn leq(x: Term, y: Term) -> (Term, Term) {
    (T::plus(x, y.clone()), y)
}

impl Implication {
    pub const ALL: [Implication; 3] =
        [Implication::LeastFixpointLeft, Implication::LeastFixpointRight, Implication::UniqueFixpoint];

    pub fn name(self) -> &'static str {
        match self {
            Implication::LeastFixpointLeft => "least-fixpoint-left",
            Implication::LeastFixpointRight => "least-fixpoint-right",
            Implication::UniqueFixpoint => "unique-fixpoint",
        }
    }

    pub fn in_ska(self) -> bool {
        self != Implication::UniqueFixpoint
    }

    /// Equations that must all hold for the hypothesis. The unique-fixpoint
    /// side condition `H(f) = 0` is stated as the equation `H(f) = 0`.
    pub fn hypotheses(self, v: &Vars) -> Vec<(Term, Term)> {
        match self {
            Implication::LeastFixpointLeft => {
                vec![leq(T::plus(c(&v.e), T::seq(c(&v.f), c(&v.g))), c(&v.g))]
            }
            Implication::LeastFixpointRight => {
                vec![leq(T::plus(c(&v.e), T::seq(c(&v.g), c(&v.f))), c(&v.g))]
            }
            Implication::UniqueFixpoint => {
                vec![(T::h(c(&v.f)), T::Zero), (T::plus(c(&v.e), T::seq(c(&v.f), c(&v.g))), c(&v.g))]
            }
        }
    }

    pub fn conclusion(self, v: &Vars) -> (Term, Term) {
        match self {
            Implication::LeastFixpointLeft => leq(T::seq(T::star(c(&v.f)), c(&v.e)), c(&v.g)),
            Implication::LeastFixpointRight => leq(T::seq(c(&v.e), T::star(c(&v.f))), c(&v.g)),
            Implication::UniqueFixpoint => (T::seq(T::star(c(&v.f)), c(&v.e)), c(&v.g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = EQUATIONS.iter().map(|s| s.name).collect();
        names.extend(Implication::ALL.iter().map(|i| i.name()));
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn ska_schemas_are_h_free() {
        let v = Vars {
            e: Term::letter('a'),
            f: Term::letter('b'),
            g: Term::One,
            alpha: Term::letter('a'),
            beta: Term::letter('c'),
        };
        for s in EQUATIONS.iter().filter(|s| s.in_ska) {
            let (l, r) = s.instantiate(&v);
            assert!(l.is_h_free() && r.is_h_free(), "{}", s.name);
        }
    }
}
