use thiserror::Error;

/// Errors raised by the formula, elimination and decision layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("environment has {found} values but the formula has arity {expected}")]
    EnvLength { expected: usize, found: usize },

    #[error("formula is not quantifier-free")]
    NotQuantifierFree,

    #[error("variable index {index} is out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("{found} names supplied for a formula of arity {expected}")]
    NameCount { expected: usize, found: usize },

    #[error("invalid pivot: {0}")]
    InvalidPivot(&'static str),

    #[error("disjunctive normal form exceeded the limit of {limit} products")]
    DnfLimit { limit: usize },

    #[error("eliminating a quantifier would produce more than {limit} literals")]
    EliminationLimit { limit: usize },

    #[error("oracle candidate set exceeded {limit} values")]
    OracleBudget { limit: usize },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
