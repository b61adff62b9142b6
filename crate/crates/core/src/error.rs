use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
    #[error("connective `{name}` expects {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid signature `{name}`: {msg}")]
    Signature { name: String, msg: String },
    #[error("formula is not in the {0}")]
    Fragment(&'static str),
    #[error("fixpoint connective encountered where a plain modal formula is required")]
    SharpNode,
    #[error("variable `{0}` is not guarded")]
    Unguarded(String),
    #[error("variable `{0}` does not occur only positively")]
    NotPositive(String),
    #[error("action `{0}` is not declared")]
    UndeclaredAction(String),
    #[error("system is not {0}")]
    SystemKind(&'static str),
    #[error("invalid system: {0}")]
    System(String),
    #[error("unassigned variable `{0}`")]
    Unassigned(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("approximation sequence decreased at round {0}")]
    NonMonotone(usize),
    #[error("iteration did not stabilise within {0} rounds")]
    NoConvergence(usize),
    #[error("valuation budget exceeded: {needed} bits needed, budget is {budget}")]
    Budget { needed: usize, budget: usize },
    #[error("input is not harmless in `{0}`")]
    NotHarmless(String),
    #[error("no untied form: {0}")]
    NoUntiedForm(String),
    #[error("normal form exceeds {0} disjuncts")]
    TooLarge(usize),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
