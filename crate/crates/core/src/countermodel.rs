//! The countermodel: synchronous languages over the one-letter alphabet
//! `{{s}}` extended with an absorbing element `dagger`.
//!
//! A unary synchronous language is determined by its set of word lengths,
//! so a language is stored as an eventually periodic subset of the naturals.
//! Concatenation is then Minkowski sum, the synchronous product is the
//! pointwise maximum, and star is the additive closure with `0`.
//!
//! Results are computed exactly by running the deterministic "lasso" walk of
//! the operation until its state repeats; the repeat point fixes threshold
//! and period, and the result is then canonicalized.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::{Serialize, Serializer};

use crate::error::CountermodelError;
use crate::syntax::{Letter, SlTerm, Term};

/// An eventually periodic set of naturals: `n` is a member iff `low[n]`
/// for `n < threshold`, else `cycle[(n - threshold) % period]`.
///
/// Always canonical: minimal period, then minimal threshold. Structural
/// equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnaryLang {
    low: Vec<bool>,
    cycle: Vec<bool>,
}

impl UnaryLang {
    /// Canonicalizes the set with prefix `low` followed by `cycle` repeated.
    pub fn new(mut low: Vec<bool>, mut cycle: Vec<bool>) -> UnaryLang {
        assert!(!cycle.is_empty(), "period must be positive");
        let p = cycle.len();
        if let Some(d) = (1..=p).find(|d| p.is_multiple_of(*d) && (0..p).all(|i| cycle[i] == cycle[(i + d) % p])) {
            cycle.truncate(d);
        }
        while let Some(&last) = low.last() {
            if last != *cycle.last().expect("nonempty cycle") {
                break;
            }
            low.pop();
            cycle.rotate_right(1);
        }
        UnaryLang { low, cycle }
    }

    pub fn empty() -> UnaryLang {
        UnaryLang::new(vec![], vec![false])
    }

    /// All lengths: the language `{{s}}*`.
    pub fn naturals() -> UnaryLang {
        UnaryLang::new(vec![], vec![true])
    }

    /// `{eps}`.
    pub fn epsilon() -> UnaryLang {
        UnaryLang::finite([0])
    }

    /// `{{s}}`, the only semilattice element.
    pub fn generator() -> UnaryLang {
        UnaryLang::finite([1])
    }

    pub fn finite<I: IntoIterator<Item = usize>>(lengths: I) -> UnaryLang {
        let lengths: Vec<usize> = lengths.into_iter().collect();
        let top = lengths.iter().max().map_or(0, |m| m + 1);
        let mut low = vec![false; top];
        for n in lengths {
            low[n] = true;
        }
        UnaryLang::new(low, vec![false])
    }

    /// `{ n >= from : n % period == residue % period }` plus the `extra` lengths.
    pub fn arithmetic(from: usize, period: usize, residue: usize, extra: &[usize]) -> UnaryLang {
        assert!(period > 0);
        let top = extra.iter().map(|m| m + 1).max().unwrap_or(0).max(from);
        let low = (0..top).map(|n| extra.contains(&n) || (n >= from && n % period == residue % period)).collect();
        let cycle = (top..top + period).map(|n| n % period == residue % period).collect();
        UnaryLang::new(low, cycle)
    }

    pub fn threshold(&self) -> usize {
        self.low.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn contains(&self, n: usize) -> bool {
        match n.checked_sub(self.threshold()) {
            None => self.low[n],
            Some(k) => self.cycle[k % self.period()],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.low.iter().chain(&self.cycle).all(|b| !b)
    }

    pub fn is_infinite(&self) -> bool {
        self.cycle.iter().any(|&b| b)
    }

    pub fn min(&self) -> Option<usize> {
        (0..self.threshold() + self.period()).find(|&n| self.contains(n))
    }

    /// Members below `limit`.
    pub fn members_below(&self, limit: usize) -> Vec<usize> {
        (0..limit).filter(|&n| self.contains(n)).collect()
    }

    fn lasso_len(&self) -> usize {
        self.threshold() + self.period()
    }

    /// Position after reading one more symbol.
    fn advance(&self, pos: usize) -> usize {
        if pos + 1 < self.lasso_len() {
            pos + 1
        } else {
            self.threshold()
        }
    }

    fn accepts_at(&self, pos: usize) -> bool {
        self.contains(pos)
    }

    pub fn union(&self, other: &UnaryLang) -> UnaryLang {
        simulate(
            (0usize, 0usize),
            |&(a, b)| (self.advance(a), other.advance(b)),
            |&(a, b)| self.accepts_at(a) || other.accepts_at(b),
        )
    }

    /// `{ a + b : a in self, b in other }`: length set of concatenation.
    pub fn minkowski_sum(&self, other: &UnaryLang) -> UnaryLang {
        // positions of `other` reached by n - a for members a <= n of self
        let start: Vec<usize> = if self.contains(0) { vec![0] } else { vec![] };
        simulate(
            (0usize, start),
            |(a, set)| {
                let a2 = self.advance(*a);
                let mut next: Vec<usize> = set.iter().map(|&p| other.advance(p)).collect();
                if self.accepts_at(a2) {
                    next.push(0);
                }
                next.sort_unstable();
                next.dedup();
                (a2, next)
            },
            |(_, set)| set.iter().any(|&p| other.accepts_at(p)),
        )
    }

    /// `{ max(a, b) : a in self, b in other }`: length set of the
    /// synchronous product, since `|u x v| = max(|u|, |v|)`.
    pub fn pointwise_max(&self, other: &UnaryLang) -> UnaryLang {
        // state: positions plus "some member seen strictly before n" flags
        let hit = |a: usize, b: usize, sa: bool, sb: bool| {
            let (ha, hb) = (self.accepts_at(a), other.accepts_at(b));
            (ha, hb, sa || ha, sb || hb)
        };
        simulate(
            (0usize, 0usize, false, false),
            |&(a, b, sa, sb)| {
                let (_, _, sa2, sb2) = hit(a, b, sa, sb);
                (self.advance(a), other.advance(b), sa2, sb2)
            },
            |&(a, b, sa, sb)| {
                let (ha, hb, sa2, sb2) = hit(a, b, sa, sb);
                (ha && sb2) || (hb && sa2)
            },
        )
    }

    /// `{0}` together with all finite sums of members.
    pub fn star(&self) -> UnaryLang {
        // Positions of self reached by n - m for every closure member m <= n;
        // the flag records whether n itself is in the closure.
        simulate(
            (vec![0usize], true),
            |(set, _)| {
                // every position here stands for a positive length n - m
                let mut next: Vec<usize> = set.iter().map(|&p| self.advance(p)).collect();
                let member = next.iter().any(|&p| self.accepts_at(p));
                if member {
                    next.push(0);
                }
                next.sort_unstable();
                next.dedup();
                (next, member)
            },
            |(_, member)| *member,
        )
    }
}

/// Runs a deterministic walk until a state repeats and reads off the
/// resulting eventually periodic membership sequence.
fn simulate<S, F, A>(init: S, step: F, accept: A) -> UnaryLang
where
    S: Clone + Eq + Hash,
    F: Fn(&S) -> S,
    A: Fn(&S) -> bool,
{
    let mut seen: HashMap<S, usize> = HashMap::new();
    let mut bits = Vec::new();
    let mut state = init;
    loop {
        if let Some(&first) = seen.get(&state) {
            let cycle = bits.split_off(first);
            return UnaryLang::new(bits, cycle);
        }
        seen.insert(state.clone(), bits.len());
        bits.push(accept(&state));
        state = step(&state);
    }
}

impl fmt::Display for UnaryLang {
    /// `{low members} + {residues} mod p from t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let low: Vec<usize> = (0..self.threshold()).filter(|&n| self.low[n]).collect();
        let (t, p) = (self.threshold(), self.period());
        let mut residues: Vec<usize> = (0..p).filter(|&i| self.cycle[i]).map(|i| (t + i) % p).collect();
        residues.sort_unstable();
        write!(f, "{{{}}} + {{{}}} mod {} from {}", join(low), join(residues), p, t)
    }
}

impl fmt::Debug for UnaryLang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of the countermodel's carrier.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ModelElement {
    Dagger,
    Lang(UnaryLang),
}

impl ModelElement {
    pub fn lang(l: UnaryLang) -> ModelElement {
        ModelElement::Lang(l)
    }

    pub fn zero() -> ModelElement {
        ModelElement::Lang(UnaryLang::empty())
    }

    pub fn one() -> ModelElement {
        ModelElement::Lang(UnaryLang::epsilon())
    }

    pub fn generator() -> ModelElement {
        ModelElement::Lang(UnaryLang::generator())
    }

    fn is_empty_lang(&self) -> bool {
        matches!(self, ModelElement::Lang(l) if l.is_empty())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ModelElement::Lang(l) if l.is_infinite())
    }
}

impl fmt::Display for ModelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelElement::Dagger => f.write_str("dagger"),
            ModelElement::Lang(l) => write!(f, "{l}"),
        }
    }
}

impl fmt::Debug for ModelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ModelElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_infinite(l: &UnaryLang) -> bool {
    l.is_infinite()
}

// Cases are tried in order; the first that applies wins.

pub fn cm_plus(k: &ModelElement, l: &ModelElement) -> ModelElement {
    match (k, l) {
        (ModelElement::Lang(a), ModelElement::Lang(b)) => ModelElement::Lang(a.union(b)),
        _ => ModelElement::Dagger,
    }
}

pub fn cm_dot(k: &ModelElement, l: &ModelElement) -> ModelElement {
    if k.is_empty_lang() || l.is_empty_lang() {
        return ModelElement::zero();
    }
    match (k, l) {
        (ModelElement::Lang(a), ModelElement::Lang(b)) => ModelElement::Lang(a.minkowski_sum(b)),
        _ => ModelElement::Dagger,
    }
}

pub fn cm_sync(k: &ModelElement, l: &ModelElement) -> ModelElement {
    if k.is_empty_lang() || l.is_empty_lang() {
        return ModelElement::zero();
    }
    match (k, l) {
        (ModelElement::Lang(a), ModelElement::Lang(b)) if !(a.is_infinite() && b.is_infinite()) => {
            ModelElement::Lang(a.pointwise_max(b))
        }
        _ => ModelElement::Dagger,
    }
}

pub fn cm_star(k: &ModelElement) -> ModelElement {
    match k {
        ModelElement::Dagger => ModelElement::Dagger,
        ModelElement::Lang(a) => ModelElement::Lang(a.star()),
    }
}

/// The model's order: `k <= l` iff `k + l = l`.
pub fn cm_leq(k: &ModelElement, l: &ModelElement) -> bool {
    cm_plus(k, l) == *l
}

pub type Valuation = BTreeMap<Letter, ModelElement>;

/// Values every letter of `t` as the generator `{{s}}`.
pub fn standard_valuation(t: &Term) -> Valuation {
    t.support().map(|s| s.letters().map(|l| (l, ModelElement::generator())).collect()).unwrap_or_default()
}

/// Interprets an H-free term in the countermodel. Letters must be valued in
/// the semilattice, whose only element is `{{s}}`.
pub fn eval_cm(t: &Term, valuation: &Valuation) -> Result<ModelElement, CountermodelError> {
    eval_cm_with(t, &|l: Letter| match valuation.get(&l) {
        None => Err(CountermodelError::Unvalued(l.as_char())),
        Some(v) if *v == ModelElement::generator() => Ok(v.clone()),
        Some(_) => Err(CountermodelError::NonSemilatticeValuation(l.as_char())),
    })
}

/// Interprets an H-free term with letters valued by `value`, which may map
/// them to any element. Used to instantiate axiom schemas whose variables
/// are written as letters.
pub fn eval_cm_with(
    t: &Term,
    value: &dyn Fn(Letter) -> Result<ModelElement, CountermodelError>,
) -> Result<ModelElement, CountermodelError> {
    fn atom(
        sl: &SlTerm,
        value: &dyn Fn(Letter) -> Result<ModelElement, CountermodelError>,
    ) -> Result<ModelElement, CountermodelError> {
        match sl {
            SlTerm::Letter(l) => value(*l),
            SlTerm::Cross(a, b) => Ok(cm_sync(&atom(a, value)?, &atom(b, value)?)),
        }
    }
    Ok(match t {
        Term::Zero => ModelElement::zero(),
        Term::One => ModelElement::one(),
        Term::Atom(sl) => atom(sl, value)?,
        Term::Plus(a, b) => cm_plus(&eval_cm_with(a, value)?, &eval_cm_with(b, value)?),
        Term::Seq(a, b) => cm_dot(&eval_cm_with(a, value)?, &eval_cm_with(b, value)?),
        Term::Sync(a, b) => cm_sync(&eval_cm_with(a, value)?, &eval_cm_with(b, value)?),
        Term::Star(a) => cm_star(&eval_cm_with(a, value)?),
        Term::H(_) => return Err(CountermodelError::HTerm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn fin(v: &[usize]) -> ModelElement {
        ModelElement::Lang(UnaryLang::finite(v.iter().copied()))
    }

    fn eval(s: &str) -> Result<ModelElement, CountermodelError> {
        let t = parse_term(s).unwrap();
        eval_cm(&t, &standard_valuation(&t))
    }

    #[test]
    fn canonical_forms() {
        let evens = UnaryLang::arithmetic(0, 2, 0, &[]);
        assert_eq!(evens.threshold(), 0);
        assert_eq!(evens.period(), 2);
        // the same set written with a longer prefix and a doubled period
        let padded = UnaryLang::new(vec![true, false, true], vec![false, true, false, true]);
        assert_eq!(padded, evens);
        assert_eq!(UnaryLang::finite([]), UnaryLang::empty());
        assert_eq!(UnaryLang::new(vec![true, true], vec![true, true]), UnaryLang::naturals());
    }

    #[test]
    fn display_format() {
        assert_eq!(UnaryLang::naturals().to_string(), "{} + {0} mod 1 from 0");
        assert_eq!(UnaryLang::finite([0, 2]).to_string(), "{0,2} + {} mod 1 from 3");
        assert_eq!(UnaryLang::arithmetic(3, 2, 1, &[0]).to_string(), "{0} + {1} mod 2 from 2");
        assert_eq!(ModelElement::Dagger.to_string(), "dagger");
    }

    #[test]
    fn infiniteness_examples() {
        assert!(!UnaryLang::epsilon().is_infinite());
        assert!(UnaryLang::naturals().is_infinite());
        assert!(UnaryLang::arithmetic(0, 2, 0, &[]).is_infinite());
    }

    #[test]
    fn operator_priorities() {
        assert_eq!(cm_dot(&ModelElement::zero(), &ModelElement::Dagger), ModelElement::zero());
        assert_eq!(cm_dot(&ModelElement::Dagger, &ModelElement::zero()), ModelElement::zero());
        assert_eq!(cm_sync(&ModelElement::zero(), &ModelElement::Dagger), ModelElement::zero());
        assert_eq!(cm_plus(&ModelElement::zero(), &ModelElement::Dagger), ModelElement::Dagger);
        assert_eq!(cm_dot(&ModelElement::one(), &ModelElement::Dagger), ModelElement::Dagger);
        let nat = ModelElement::Lang(UnaryLang::naturals());
        assert_eq!(cm_sync(&nat, &nat), ModelElement::Dagger);
        assert_eq!(cm_star(&ModelElement::Dagger), ModelElement::Dagger);
    }

    #[test]
    fn sync_is_pointwise_max() {
        assert_eq!(cm_sync(&fin(&[1]), &fin(&[0, 2])), fin(&[1, 2]));
        let evens = ModelElement::Lang(UnaryLang::arithmetic(0, 2, 0, &[]));
        // max({3}, evens) = {3} + evens from 4
        let expected = ModelElement::Lang(UnaryLang::arithmetic(4, 2, 0, &[3]));
        assert_eq!(cm_sync(&fin(&[3]), &evens), expected);
    }

    #[test]
    fn star_and_sum() {
        let threes_fives = UnaryLang::finite([3, 5]).star();
        // numerical semigroup <3,5>: 0,3,5,6,8,9,10,...
        assert_eq!(threes_fives.members_below(12), vec![0, 3, 5, 6, 8, 9, 10, 11]);
        assert_eq!(threes_fives.threshold(), 8);
        assert_eq!(UnaryLang::epsilon().star(), UnaryLang::epsilon());
        assert_eq!(UnaryLang::empty().star(), UnaryLang::epsilon());
        let s = UnaryLang::finite([1, 4]).minkowski_sum(&UnaryLang::arithmetic(0, 3, 0, &[]));
        assert_eq!(s.members_below(10), vec![1, 4, 7]);
        assert_eq!(s.members_below(14), vec![1, 4, 7, 10, 13]);
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(eval("a*").unwrap(), ModelElement::Lang(UnaryLang::naturals()));
        assert_eq!(eval("a* & a*").unwrap(), ModelElement::Dagger);
        assert_eq!(eval("(a;a)* & (a;a)*").unwrap(), ModelElement::Dagger);
        assert_eq!(eval("[a & b] ; a").unwrap(), fin(&[2]));
        assert_eq!(eval("H(a)"), Err(CountermodelError::HTerm));
    }

    #[test]
    fn valuation_must_hit_the_semilattice() {
        let t = parse_term("a ; b").unwrap();
        let mut v = standard_valuation(&t);
        v.insert(Letter::new('b').unwrap(), ModelElement::one());
        assert_eq!(eval_cm(&t, &v), Err(CountermodelError::NonSemilatticeValuation('b')));
        v.remove(&Letter::new('b').unwrap());
        assert_eq!(eval_cm(&t, &v), Err(CountermodelError::Unvalued('b')));
    }
}
