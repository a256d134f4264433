use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("letter '{letter}' at offset {offset} is not in the declared alphabet")]
    UnknownLetter { offset: usize, letter: char },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("bounded languages have different bounds ({left} vs {right})")]
    BoundMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("determinized state-pair frontier exceeded the cap of {cap}")]
    ResourceLimit { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("system is not guarded: entry ({row}, {col}) accepts the empty word")]
    NotGuarded { row: usize, col: usize },
    #[error("system dimensions are inconsistent")]
    Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountermodelError {
    #[error("H is not an operator of the countermodel")]
    HTerm,
    #[error("letter '{0}' must be valued in the semilattice {{{{s}}}}")]
    NonSemilatticeValuation(char),
    #[error("letter '{0}' has no value")]
    Unvalued(char),
}
