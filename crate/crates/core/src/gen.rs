//! Seeded random generation of terms, semilattice atoms and countermodel
//! elements for property checking.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::countermodel::{ModelElement, UnaryLang};
use crate::semilattice::SymSet;
use crate::syntax::{Letter, SlTerm, Term};

#[derive(Clone, Debug)]
pub struct TermGen {
    letters: Vec<Letter>,
    pub max_size: usize,
    pub allow_sync: bool,
    pub allow_h: bool,
}

impl TermGen {
    pub fn new(alphabet: SymSet, max_size: usize) -> TermGen {
        assert!(max_size >= 1);
        TermGen { letters: alphabet.letters().collect(), max_size, allow_sync: true, allow_h: true }
    }

    pub fn without_h(mut self) -> TermGen {
        self.allow_h = false;
        self
    }

    pub fn without_sync(mut self) -> TermGen {
        self.allow_sync = false;
        self
    }

    /// A term whose size is uniform in `1..=max_size`.
    pub fn term<R: Rng>(&self, rng: &mut R) -> Term {
        let size = rng.gen_range(1..=self.max_size);
        self.term_of_size(rng, size)
    }

    pub fn term_of_size<R: Rng>(&self, rng: &mut R, size: usize) -> Term {
        match size {
            0 | 1 => match rng.gen_range(0..10) {
                0 => Term::Zero,
                1 => Term::One,
                _ => Term::Atom(SlTerm::Letter(self.letter(rng))),
            },
            2 => self.unary(rng, 1),
            _ => {
                let roll = rng.gen_range(0..20);
                if roll == 0 && size % 2 == 1 {
                    return Term::Atom(self.sl_of_size(rng, size));
                }
                if roll < 5 {
                    return self.unary(rng, size - 1);
                }
                let left = rng.gen_range(1..=size - 2);
                let (l, r) = (self.term_of_size(rng, left), self.term_of_size(rng, size - 1 - left));
                let ops: &[u8] = if self.allow_sync { &[0, 1, 2] } else { &[0, 1] };
                match ops.choose(rng).expect("nonempty") {
                    0 => Term::plus(l, r),
                    1 => Term::seq(l, r),
                    _ => Term::sync(l, r),
                }
            }
        }
    }

    fn unary<R: Rng>(&self, rng: &mut R, inner_size: usize) -> Term {
        let inner = self.term_of_size(rng, inner_size);
        if self.allow_h && rng.gen_ratio(1, 5) {
            Term::h(inner)
        } else {
            Term::star(inner)
        }
    }

    fn letter<R: Rng>(&self, rng: &mut R) -> Letter {
        *self.letters.choose(rng).expect("nonempty alphabet")
    }

    /// A semilattice term; `size` is rounded down to an odd node count.
    pub fn sl_of_size<R: Rng>(&self, rng: &mut R, size: usize) -> SlTerm {
        if size < 3 {
            return SlTerm::Letter(self.letter(rng));
        }
        let leaves = size.div_ceil(2);
        let left_leaves = rng.gen_range(1..leaves);
        SlTerm::cross(self.sl_of_size(rng, 2 * left_leaves - 1), self.sl_of_size(rng, 2 * (leaves - left_leaves) - 1))
    }

    pub fn sl<R: Rng>(&self, rng: &mut R) -> SlTerm {
        let size = 2 * rng.gen_range(0..4) + 1;
        self.sl_of_size(rng, size)
    }
}

/// A random element of the countermodel, covering the empty language,
/// `{eps}`, finite sets, infinite eventually periodic sets and dagger.
pub fn model_element<R: Rng>(rng: &mut R) -> ModelElement {
    match rng.gen_range(0..10) {
        0 => ModelElement::Dagger,
        1 => ModelElement::zero(),
        2 => ModelElement::one(),
        3..=5 => {
            let n = rng.gen_range(1..4);
            ModelElement::Lang(UnaryLang::finite((0..n).map(|_| rng.gen_range(0..7))))
        }
        _ => {
            let period = rng.gen_range(1..5);
            let from = rng.gen_range(0..6);
            let residue = rng.gen_range(0..period);
            let extra: Vec<usize> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..6)).collect();
            ModelElement::Lang(UnaryLang::arithmetic(from, period, residue, &extra))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes_respect_the_limit() {
        let g = TermGen::new(SymSet::of("abc"), 12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let t = g.term(&mut rng);
            assert!(t.size() <= 12, "{t} has size {}", t.size());
            assert!(t.support().is_none_or(|s| s.is_subset(SymSet::of("abc"))));
        }
    }

    #[test]
    fn exact_sizes() {
        let g = TermGen::new(SymSet::of("ab"), 9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for size in 1..=9 {
            for _ in 0..50 {
                assert_eq!(g.term_of_size(&mut rng, size).size(), size);
            }
        }
    }

    fn has_sync(t: &Term) -> bool {
        match t {
            Term::Sync(..) => true,
            Term::Plus(l, r) | Term::Seq(l, r) => has_sync(l) || has_sync(r),
            Term::Star(e) | Term::H(e) => has_sync(e),
            _ => false,
        }
    }

    #[test]
    fn flags_are_respected() {
        let g = TermGen::new(SymSet::of("ab"), 10).without_h().without_sync();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let t = g.term(&mut rng);
            assert!(t.is_h_free());
            assert!(!has_sync(&t), "{t}");
        }
    }

    #[test]
    fn same_seed_same_terms() {
        let g = TermGen::new(SymSet::of("ab"), 8);
        let a: Vec<Term> = (0..20)
            .map({
                let mut rng = ChaCha8Rng::seed_from_u64(11);
                move |_| g.term(&mut rng)
            })
            .collect();
        let g = TermGen::new(SymSet::of("ab"), 8);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b: Vec<Term> = (0..20).map(|_| g.term(&mut rng)).collect();
        assert_eq!(a, b);
    }
}
