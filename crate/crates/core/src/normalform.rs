//! Linear systems over terms and their solution by state elimination.
//!
//! `build_system(e)` turns the syntactic automaton of `e` into a guarded
//! system `M.y + x = y` whose entries are sums of canonical atoms. Solving it
//! by eliminating one unknown at a time only ever combines entries with `+`,
//! `;` and `*`, so the solution stays inside the NSF fragment.

use std::collections::BTreeMap;
use std::fmt;

use crate::derivatives::{build_automaton, out};
use crate::equivalence::equiv;
use crate::error::{EquivError, SolveError};
use crate::semilattice::{pi, SymSet};
use crate::syntax::{is_nsf, Term};

/// `a + b` with `0` as unit.
pub fn mk_plus(a: Term, b: Term) -> Term {
    match (&a, &b) {
        (Term::Zero, _) => b,
        (_, Term::Zero) => a,
        _ => Term::plus(a, b),
    }
}

/// `a ; b` with `1` as unit and `0` as annihilator.
pub fn mk_seq(a: Term, b: Term) -> Term {
    match (&a, &b) {
        (Term::Zero, _) | (_, Term::Zero) => Term::Zero,
        (Term::One, _) => b,
        (_, Term::One) => a,
        _ => Term::seq(a, b),
    }
}

/// `a*`, collapsing the stars of the constants to `1`.
pub fn mk_star(a: Term) -> Term {
    match a {
        Term::Zero | Term::One => Term::One,
        _ => Term::star(a),
    }
}

/// A linear system `M.y + x = y` over an ordered list of unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinSystem {
    states: Vec<Term>,
    matrix: Vec<Vec<Term>>,
    vector: Vec<Term>,
}

impl LinSystem {
    pub fn new(states: Vec<Term>, matrix: Vec<Vec<Term>>, vector: Vec<Term>) -> Result<LinSystem, SolveError> {
        let n = states.len();
        if vector.len() != n || matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(SolveError::Shape);
        }
        Ok(LinSystem { states, matrix, vector })
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

    pub fn matrix(&self, i: usize, j: usize) -> &Term {
        &self.matrix[i][j]
    }

    pub fn vector(&self, i: usize) -> &Term {
        &self.vector[i]
    }

    /// First matrix entry whose language contains the empty word.
    pub fn unguarded_entry(&self) -> Option<(usize, usize)> {
        self.matrix.iter().enumerate().find_map(|(i, row)| row.iter().position(out).map(|j| (i, j)))
    }

    pub fn is_guarded(&self) -> bool {
        self.unguarded_entry().is_none()
    }

    pub fn is_normal_form(&self) -> bool {
        self.vector.iter().all(is_nsf) && self.matrix.iter().flatten().all(is_nsf)
    }

    /// Removes unknown `k`, substituting its defining equation:
    ///
    /// ```text
    /// M'(i,j) = M(i,k) ; M(k,k)* ; M(k,j) + M(i,j)
    /// x'(i)   = x(i) + M(i,k) ; M(k,k)* ; x(k)
    /// ```
    pub fn eliminate(&self, k: usize) -> LinSystem {
        let loop_k = mk_star(self.matrix[k][k].clone());
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != k).collect();
        let through_k: Vec<Term> = keep.iter().map(|&i| mk_seq(self.matrix[i][k].clone(), loop_k.clone())).collect();
        let matrix = keep
            .iter()
            .zip(&through_k)
            .map(|(&i, via)| {
                keep.iter()
                    .map(|&j| mk_plus(mk_seq(via.clone(), self.matrix[k][j].clone()), self.matrix[i][j].clone()))
                    .collect()
            })
            .collect();
        let vector = keep
            .iter()
            .zip(&through_k)
            .map(|(&i, via)| mk_plus(self.vector[i].clone(), mk_seq(via.clone(), self.vector[k].clone())))
            .collect();
        LinSystem { states: keep.iter().map(|&i| self.states[i].clone()).collect(), matrix, vector }
    }

    /// `x(q) + sum over q' of M(q,q') ; y(q')`, with unit simplification.
    pub fn apply(&self, y: &[Term], q: usize) -> Term {
        let sum = (0..self.len()).map(|j| mk_seq(self.matrix[q][j].clone(), y[j].clone())).fold(Term::Zero, mk_plus);
        mk_plus(self.vector[q].clone(), sum)
    }

    /// Whether `y` solves the system, up to language equality.
    pub fn is_solution(&self, y: &[Term]) -> Result<bool, EquivError> {
        if y.len() != self.len() {
            return Ok(false);
        }
        for q in 0..self.len() {
            if !equiv(&self.apply(y, q), &y[q])?.equivalent {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for LinSystem {
    /// Tabular dump: one row per unknown, tab-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("state")?;
        for j in 0..self.len() {
            write!(f, "\tM[.,{j}]")?;
        }
        writeln!(f, "\tx")?;
        for i in 0..self.len() {
            write!(f, "{i}: {}", self.states[i])?;
            for j in 0..self.len() {
                write!(f, "\t{}", self.matrix[i][j])?;
            }
            writeln!(f, "\t{}", self.vector[i])?;
        }
        Ok(())
    }
}

/// Assignment of a term to every unknown, aligned with the system's states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Vec<Term>,
}

/// The system of `e` over `reach(e) + {e}`, with `e` as unknown 0.
pub fn build_system(e: &Term) -> LinSystem {
    let aut = build_automaton(e);
    let n = aut.len();
    let mut letters: Vec<Vec<Vec<SymSet>>> = vec![vec![Vec::new(); n]; n];
    for (q, row) in letters.iter_mut().enumerate() {
        for (a, targets) in aut.transitions(q) {
            for &t in targets {
                row[t].push(*a);
            }
        }
    }
    let matrix = letters
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|mut sets| {
                    sets.sort();
                    Term::sum(sets.into_iter().map(|a| Term::atom(pi(a))))
                })
                .collect()
        })
        .collect();
    let vector = (0..n).map(|q| if aut.is_accepting(q) { Term::One } else { Term::Zero }).collect();
    LinSystem { states: aut.states().to_vec(), matrix, vector }
}

/// Solves a guarded system, eliminating unknowns from the last to the first
/// and back-substituting in the opposite order.
pub fn solve(sys: &LinSystem) -> Result<Solution, SolveError> {
    if let Some((row, col)) = sys.unguarded_entry() {
        return Err(SolveError::NotGuarded { row, col });
    }
    // Each stage drops its last unknown; remember the pivot rows.
    let mut stages = vec![sys.clone()];
    while stages.last().is_some_and(|s| !s.is_empty()) {
        let s = stages.last().expect("nonempty");
        let next = s.eliminate(s.len() - 1);
        stages.push(next);
    }
    let mut assignment: Vec<Term> = Vec::with_capacity(sys.len());
    for stage in stages.iter().rev().skip(1) {
        let k = stage.len() - 1;
        let mut rhs = stage.vector[k].clone();
        for (j, value) in assignment.iter().enumerate() {
            rhs = mk_plus(rhs, mk_seq(stage.matrix[k][j].clone(), value.clone()));
        }
        assignment.push(mk_seq(mk_star(stage.matrix[k][k].clone()), rhs));
    }
    Ok(Solution { assignment })
}

/// An NSF term with the same language as `e`.
pub fn to_normal_form(e: &Term) -> Result<Term, SolveError> {
    let solution = solve(&build_system(e))?;
    Ok(solution.assignment.into_iter().next().expect("e is an unknown of its own system"))
}

/// Matrix entries grouped by row, for inspection.
pub fn nonzero_entries(sys: &LinSystem) -> BTreeMap<(usize, usize), Term> {
    let mut map = BTreeMap::new();
    for i in 0..sys.len() {
        for j in 0..sys.len() {
            if sys.matrix[i][j] != Term::Zero {
                map.insert((i, j), sys.matrix[i][j].clone());
            }
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::sem_bounded;
    use crate::syntax::{classify, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn system_of_letter() {
        let sys = build_system(&t("a"));
        assert_eq!(sys.states(), &[t("a"), t("1")]);
        assert_eq!(sys.matrix(0, 1), &t("a"));
        assert_eq!(sys.matrix(0, 0), &Term::Zero);
        assert_eq!(sys.matrix(1, 0), &Term::Zero);
        assert_eq!(sys.matrix(1, 1), &Term::Zero);
        assert_eq!(sys.vector(0), &Term::Zero);
        assert_eq!(sys.vector(1), &Term::One);
    }

    #[test]
    fn system_of_zero() {
        let sys = build_system(&Term::Zero);
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.matrix(0, 0), &Term::Zero);
        assert_eq!(sys.vector(0), &Term::Zero);
    }

    #[test]
    fn system_of_sync() {
        let sys = build_system(&t("a & b"));
        let j = sys.states().iter().position(|q| *q == t("1 & 1")).unwrap();
        assert_eq!(sys.matrix(0, j), &t("[a & b]"));
        assert!(sys.is_guarded());
        assert!(sys.is_normal_form());
    }

    #[test]
    fn entries_sum_letter_sets_in_order() {
        let sys = build_system(&t("(b + a + [a & b])*"));
        let one = sys.states().iter().position(|q| *q == t("1 ; (b + a + [a & b])*")).unwrap();
        assert_eq!(sys.matrix(0, one), &t("a + [a & b] + b"));
    }

    #[test]
    fn empty_system() {
        let sys = LinSystem::new(vec![], vec![], vec![]).unwrap();
        assert_eq!(solve(&sys).unwrap(), Solution { assignment: vec![] });
    }

    #[test]
    fn arden_instance() {
        let sys = LinSystem::new(vec![t("q")], vec![vec![t("a")]], vec![Term::One]).unwrap();
        let sol = solve(&sys).unwrap();
        assert_eq!(sol.assignment, vec![t("a*")]);
        assert!(equiv(&sol.assignment[0], &t("a*")).unwrap().equivalent);
        assert!(sys.is_solution(&sol.assignment).unwrap());
    }

    #[test]
    fn unguarded_system_is_rejected() {
        let sys = LinSystem::new(vec![t("q")], vec![vec![t("a*")]], vec![Term::One]).unwrap();
        assert_eq!(solve(&sys), Err(SolveError::NotGuarded { row: 0, col: 0 }));
        assert_eq!(LinSystem::new(vec![t("q")], vec![], vec![Term::One]), Err(SolveError::Shape));
    }

    #[test]
    fn solving_letter_system() {
        let sys = build_system(&t("a"));
        let sol = solve(&sys).unwrap();
        assert!(equiv(&sol.assignment[0], &t("a")).unwrap().equivalent);
        assert!(sys.is_solution(&sol.assignment).unwrap());
    }

    #[test]
    fn normal_form_examples() {
        let nf = to_normal_form(&t("a & b")).unwrap();
        assert!(classify(&nf).nsf);
        assert_eq!(sem_bounded(&nf, 3), sem_bounded(&t("[a & b]"), 3));

        let nf = to_normal_form(&t("a* & a*")).unwrap();
        assert!(classify(&nf).nsf);
        assert!(equiv(&nf, &t("a*")).unwrap().equivalent);

        assert_eq!(to_normal_form(&Term::Zero).unwrap(), Term::Zero);
    }

    #[test]
    fn identity_vector_solves_own_system() {
        for s in ["a* & b", "(a ; b)* & a*", "H(a + 1) ; b*", "(a & b)* + b"] {
            let sys = build_system(&t(s));
            assert!(sys.is_solution(sys.states()).unwrap(), "{s}");
        }
    }

    #[test]
    fn elimination_preserves_normal_form() {
        let mut sys = build_system(&t("(a & b*)* ; a"));
        assert!(sys.is_normal_form());
        while !sys.is_empty() {
            sys = sys.eliminate(sys.len() - 1);
            assert!(sys.is_normal_form());
            assert!(sys.is_guarded());
        }
    }

    #[test]
    fn unit_simplification() {
        assert_eq!(mk_seq(Term::One, t("a")), t("a"));
        assert_eq!(mk_seq(t("a"), Term::Zero), Term::Zero);
        assert_eq!(mk_plus(Term::Zero, t("a")), t("a"));
        assert_eq!(mk_star(Term::Zero), Term::One);
        assert_eq!(mk_plus(t("a"), t("b")), t("a + b"));
    }

    #[test]
    fn system_dump_has_row_per_state() {
        let sys = build_system(&t("a ; b"));
        let text = sys.to_string();
        assert_eq!(text.lines().count(), sys.len() + 1);
        assert!(text.lines().nth(1).unwrap().starts_with("0: a ; b"));
    }
}
