//! Term syntax: the AST for SF1 expressions, a concrete ASCII syntax with a
//! parser and a minimal-parenthesis printer, and fragment classification.
//!
//! Concrete syntax, loosest to tightest binding:
//!
//! ```text
//! e + f      choice
//! e & f      synchronous product
//! e ; f      sequential composition
//! e*         iteration (postfix)
//! H(e)       empty-word projection
//! 0 1 a..z   constants and letters
//! [a & b]    a single semilattice atom built from letters and &
//! ```
//!
//! All binary operators associate to the left. `#` starts a comment that
//! runs to the end of the line.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::ParseError;
use crate::semilattice::{normalize_sl, SymSet};

/// A letter of the alphabet, one of `a`..=`z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const COUNT: usize = 26;

    pub fn new(c: char) -> Option<Letter> {
        if c.is_ascii_lowercase() {
            Some(Letter(c as u8 - b'a'))
        } else {
            None
        }
    }

    pub fn from_index(index: usize) -> Letter {
        assert!(index < Self::COUNT, "letter index {index} out of range");
        Letter(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn as_char(self) -> char {
        (b'a' + self.0) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Semilattice term: letters combined with the synchronous product only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlTerm {
    Letter(Letter),
    Cross(Arc<SlTerm>, Arc<SlTerm>),
}

impl SlTerm {
    pub fn letter(c: char) -> SlTerm {
        SlTerm::Letter(Letter::new(c).expect("letter must be in a..z"))
    }

    pub fn cross(l: SlTerm, r: SlTerm) -> SlTerm {
        SlTerm::Cross(Arc::new(l), Arc::new(r))
    }

    pub fn size(&self) -> usize {
        match self {
            SlTerm::Letter(_) => 1,
            SlTerm::Cross(l, r) => 1 + l.size() + r.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parenthesize_cross: bool) -> fmt::Result {
        match self {
            SlTerm::Letter(l) => write!(f, "{l}"),
            SlTerm::Cross(l, r) => {
                if parenthesize_cross {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, false)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, true)?;
                if parenthesize_cross {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for SlTerm {
    /// Prints the bare semilattice expression, without the atom brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

/// An SF1 expression.
///
/// Children are reference counted, so cloning a term is shallow. Equality,
/// ordering and hashing are structural; no algebraic identification happens
/// at construction time.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    Atom(SlTerm),
    Plus(Arc<Term>, Arc<Term>),
    Seq(Arc<Term>, Arc<Term>),
    Sync(Arc<Term>, Arc<Term>),
    Star(Arc<Term>),
    H(Arc<Term>),
}

impl Term {
    pub fn letter(c: char) -> Term {
        Term::Atom(SlTerm::letter(c))
    }

    pub fn atom(sl: SlTerm) -> Term {
        Term::Atom(sl)
    }

    pub fn plus(l: Term, r: Term) -> Term {
        Term::Plus(Arc::new(l), Arc::new(r))
    }

    pub fn seq(l: Term, r: Term) -> Term {
        Term::Seq(Arc::new(l), Arc::new(r))
    }

    pub fn sync(l: Term, r: Term) -> Term {
        Term::Sync(Arc::new(l), Arc::new(r))
    }

    pub fn star(inner: Term) -> Term {
        Term::Star(Arc::new(inner))
    }

    pub fn h(inner: Term) -> Term {
        Term::H(Arc::new(inner))
    }

    /// Left-nested sum of the given terms; `0` for an empty iterator.
    pub fn sum<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        terms.into_iter().reduce(Term::plus).unwrap_or(Term::Zero)
    }

    /// Number of AST nodes, counting the nodes of semilattice atoms.
    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One => 1,
            Term::Atom(sl) => sl.size(),
            Term::Plus(l, r) | Term::Seq(l, r) | Term::Sync(l, r) => 1 + l.size() + r.size(),
            Term::Star(e) | Term::H(e) => 1 + e.size(),
        }
    }

    /// The set of letters occurring in the term, or `None` when there are none.
    pub fn support(&self) -> Option<SymSet> {
        SymSet::from_bits(self.support_bits())
    }

    pub(crate) fn support_bits(&self) -> u32 {
        match self {
            Term::Zero | Term::One => 0,
            Term::Atom(sl) => crate::semilattice::sl_sem(sl).bits(),
            Term::Plus(l, r) | Term::Seq(l, r) | Term::Sync(l, r) => l.support_bits() | r.support_bits(),
            Term::Star(e) | Term::H(e) => e.support_bits(),
        }
    }

    pub fn is_h_free(&self) -> bool {
        match self {
            Term::Zero | Term::One | Term::Atom(_) => true,
            Term::Plus(l, r) | Term::Seq(l, r) | Term::Sync(l, r) => l.is_h_free() && r.is_h_free(),
            Term::Star(e) => e.is_h_free(),
            Term::H(_) => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Plus(..) => 0,
            Term::Sync(..) => 1,
            Term::Seq(..) => 2,
            Term::Star(..) => 3,
            Term::Zero | Term::One | Term::Atom(_) | Term::H(_) => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        let binary = |f: &mut fmt::Formatter<'_>, l: &Term, op: &str, r: &Term| {
            l.fmt_child(f, l.precedence() < prec)?;
            f.write_str(op)?;
            r.fmt_child(f, r.precedence() <= prec)
        };
        match self {
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Atom(SlTerm::Letter(l)) => write!(f, "{l}"),
            Term::Atom(sl) => write!(f, "[{sl}]"),
            Term::Plus(l, r) => binary(f, l, " + ", r),
            Term::Sync(l, r) => binary(f, l, " & ", r),
            Term::Seq(l, r) => binary(f, l, " ; ", r),
            Term::Star(e) => {
                e.fmt_child(f, e.precedence() < prec)?;
                f.write_str("*")
            }
            Term::H(e) => write!(f, "H({e})"),
        }
    }
}

/// Prints a term in the concrete syntax with minimal parentheses.
pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// Parses a term. Letters are unrestricted.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    Parser::new(text, None).parse_all()
}

/// Parses a term, rejecting letters outside `alphabet`.
pub fn parse_term_in(text: &str, alphabet: SymSet) -> Result<Term, ParseError> {
    Parser::new(text, Some(alphabet)).parse_all()
}

/// Parses an alphabet declaration such as `abc` or `a,b,c`.
pub fn parse_alphabet(text: &str) -> Result<SymSet, ParseError> {
    let mut bits = 0u32;
    for (offset, c) in text.char_indices() {
        if c == ',' || c.is_whitespace() {
            continue;
        }
        let letter = Letter::new(c)
            .ok_or(ParseError::Syntax { offset, message: format!("expected a letter a-z, found '{c}'") })?;
        bits |= 1 << letter.index();
    }
    SymSet::from_bits(bits)
        .ok_or(ParseError::Syntax { offset: text.len(), message: "alphabet must contain at least one letter".into() })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: Option<SymSet>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, alphabet: Option<SymSet>) -> Self {
        Parser { src, pos: 0, alphabet }
    }

    fn parse_all(mut self) -> Result<Term, ParseError> {
        let t = self.sum()?;
        self.skip_trivia();
        match self.peek() {
            None => Ok(t),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_trivia();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(x) => format!("'{x}'"),
                None => "end of input".to_string(),
            };
            Err(self.error(format!("expected '{c}', found {found}")))
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax { offset: self.pos, message }
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut t = self.sync()?;
        while self.eat('+') {
            t = Term::plus(t, self.sync()?);
        }
        Ok(t)
    }

    fn sync(&mut self) -> Result<Term, ParseError> {
        let mut t = self.seq()?;
        while self.eat('&') {
            t = Term::sync(t, self.seq()?);
        }
        Ok(t)
    }

    fn seq(&mut self) -> Result<Term, ParseError> {
        let mut t = self.postfix()?;
        while self.eat(';') {
            t = Term::seq(t, self.postfix()?);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.eat('*') {
            t = Term::star(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some('H') => {
                self.pos += 1;
                self.expect('(')?;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(Term::h(inner))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let sl = self.sl_product()?;
                self.expect(']')?;
                Ok(Term::Atom(sl))
            }
            Some(c) if c.is_ascii_lowercase() => Ok(Term::Atom(SlTerm::Letter(self.letter()?))),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn letter(&mut self) -> Result<Letter, ParseError> {
        let offset = self.pos;
        let c = self.peek().ok_or_else(|| self.error("expected a letter".into()))?;
        let letter = Letter::new(c).ok_or_else(|| self.error(format!("expected a letter, found '{c}'")))?;
        if let Some(alphabet) = self.alphabet {
            if !alphabet.contains(letter) {
                return Err(ParseError::UnknownLetter { offset, letter: c });
            }
        }
        self.pos += 1;
        Ok(letter)
    }

    fn sl_product(&mut self) -> Result<SlTerm, ParseError> {
        let mut t = self.sl_primary()?;
        while self.eat('&') {
            t = SlTerm::cross(t, self.sl_primary()?);
        }
        Ok(t)
    }

    fn sl_primary(&mut self) -> Result<SlTerm, ParseError> {
        if self.eat('(') {
            let t = self.sl_product()?;
            self.expect(')')?;
            Ok(t)
        } else {
            Ok(SlTerm::Letter(self.letter()?))
        }
    }
}

/// Fragment memberships of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fragments {
    /// Built from letters and `&` only.
    pub sl: bool,
    /// Free of `H`.
    pub ska: bool,
    /// Any well-formed term.
    pub sf1: bool,
    /// Canonical atoms under `+`, `;`, `*`, `0`, `1` only.
    pub nsf: bool,
}

pub fn classify(t: &Term) -> Fragments {
    Fragments { sl: is_sl(t), ska: t.is_h_free(), sf1: true, nsf: is_nsf(t) }
}

fn is_sl(t: &Term) -> bool {
    match t {
        Term::Atom(_) => true,
        Term::Sync(l, r) => is_sl(l) && is_sl(r),
        _ => false,
    }
}

pub fn is_nsf(t: &Term) -> bool {
    match t {
        Term::Zero | Term::One => true,
        Term::Atom(sl) => normalize_sl(sl) == *sl,
        Term::Plus(l, r) | Term::Seq(l, r) => is_nsf(l) && is_nsf(r),
        Term::Star(e) => is_nsf(e),
        Term::Sync(..) | Term::H(_) => false,
    }
}

/// Converts an SL-fragment term (atoms joined by `&`) into a single atom.
pub fn as_sl_term(t: &Term) -> Option<SlTerm> {
    match t {
        Term::Atom(sl) => Some(sl.clone()),
        Term::Sync(l, r) => Some(SlTerm::cross(as_sl_term(l)?, as_sl_term(r)?)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::letter('a')
    }
    fn b() -> Term {
        Term::letter('b')
    }

    #[test]
    fn parses_sync_of_letters() {
        assert_eq!(parse_term("a & b").unwrap(), Term::sync(a(), b()));
    }

    #[test]
    fn parses_nested_example() {
        let expected = Term::sync(Term::star(Term::seq(a(), b())), Term::h(Term::One));
        assert_eq!(parse_term("(a ; b)* & H(1)").unwrap(), expected);
    }

    #[test]
    fn incomplete_input_reports_offset() {
        match parse_term("a &") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(matches!(parse_term("a b"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_term(")"), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(parse_term("").is_err());
        assert!(parse_term("H a").is_err());
        assert!(parse_term("[a + b]").is_err());
        assert!(parse_term("A").is_err());
    }

    #[test]
    fn unknown_letter_with_declared_alphabet() {
        let sigma = parse_alphabet("ab").unwrap();
        assert!(parse_term_in("a ; b", sigma).is_ok());
        assert_eq!(parse_term_in("a ; c", sigma), Err(ParseError::UnknownLetter { offset: 4, letter: 'c' }));
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_term("a # first\n + b # second").unwrap();
        assert_eq!(t, Term::plus(a(), b()));
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_term("a + b & a ; b*").unwrap();
        let expected = Term::plus(a(), Term::sync(b(), Term::seq(a(), Term::star(b()))));
        assert_eq!(t, expected);
        let left = parse_term("a ; b ; a").unwrap();
        assert_eq!(left, Term::seq(Term::seq(a(), b()), a()));
        assert_eq!(parse_term("a**").unwrap(), Term::star(Term::star(a())));
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        assert_eq!(print_term(&Term::sync(a(), b())), "a & b");
        assert_eq!(print_term(&Term::star(Term::plus(a(), b()))), "(a + b)*");
        assert_eq!(print_term(&Term::Zero), "0");
        assert_eq!(print_term(&Term::seq(a(), Term::seq(b(), a()))), "a ; (b ; a)");
        assert_eq!(print_term(&Term::seq(Term::seq(a(), b()), a())), "a ; b ; a");
        assert_eq!(print_term(&Term::h(Term::plus(a(), Term::One))), "H(a + 1)");
    }

    #[test]
    fn atom_brackets_round_trip() {
        let t = parse_term("[a & (b & c)] ; [a & b & c]").unwrap();
        assert_eq!(print_term(&t), "[a & (b & c)] ; [a & b & c]");
        assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
    }

    #[test]
    fn classify_examples() {
        let f = classify(&parse_term("a & b").unwrap());
        assert!(f.sl && f.ska && f.sf1 && !f.nsf);

        let f = classify(&parse_term("H(a)").unwrap());
        assert!(!f.sl && !f.ska && f.sf1);

        let f = classify(&parse_term("[a & b] ; c*").unwrap());
        assert!(f.nsf);
        let f = classify(&parse_term("[b & a] ; c*").unwrap());
        assert!(!f.nsf, "atom b & a is not canonical");
        let f = classify(&parse_term("(a & b) ; c*").unwrap());
        assert!(!f.nsf, "& outside an atom leaves the NSF fragment");
    }

    #[test]
    fn support_collects_letters() {
        let t = parse_term("(a ; c)* + [b & a]").unwrap();
        assert_eq!(t.support().unwrap().to_string(), "{a,b,c}");
        assert_eq!(parse_term("1 + 0*").unwrap().support(), None);
    }

    #[test]
    fn size_counts_atom_nodes() {
        assert_eq!(parse_term("a").unwrap().size(), 1);
        assert_eq!(parse_term("[a & b]").unwrap().size(), 3);
        assert_eq!(parse_term("(a + b)*").unwrap().size(), 4);
    }
}
