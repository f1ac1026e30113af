use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error("pole at evaluation point: denominator `{denominator}` vanishes")]
    Pole { denominator: String },
    #[error("parameter sigma is not bound")]
    UnboundSigma,
    #[error("jet mismatch: {0}")]
    Mismatch(String),
    #[error("division by a jet with zero value")]
    ZeroDivisor,
    #[error("jet order {requested} exceeds the cap {cap}")]
    OrderCap { requested: usize, cap: usize },
    #[error("singular matrix at evaluation point")]
    Singular,
    #[error("degenerate Hessian block at evaluation point")]
    DegenerateHessian,
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error("integrability failure: {0}")]
    Integrability(String),
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("field depends on coordinates other than (w,z): {0}")]
    Dependency(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("pole not found at declared location")]
    PoleNotFound,
    #[error("tetrad is not dual to the metric at the evaluation point")]
    TetradMismatch,
    #[error("rank mismatch: {0}")]
    Rank(String),
}

pub type Result<T> = std::result::Result<T, Error>;
