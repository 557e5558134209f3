use thiserror::Error;

/// Errors from monomial and polynomial construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("generator `{name}` has arity {arity}; only binary generators are supported")]
    UnsupportedArity { name: String, arity: usize },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    BadGeneratorName(String),
    #[error("alphabet of {0} generators is too large")]
    AlphabetTooLarge(usize),
    #[error("bad precedence: {0}")]
    BadPrecedence(String),
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("not a shuffle tree: {0}")]
    NotShuffle(String),
    #[error("slot {slot} out of range for arity {arity}")]
    BadSlot { slot: usize, arity: usize },
    #[error("invalid shuffle redistribution: {0}")]
    BadRedistribution(String),
    #[error("arity {0} exceeds the cap")]
    ArityCap(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Errors from the rewriting engine.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("arity {arity} exceeds the certified arity {certified}")]
    BeyondCertified { arity: usize, certified: usize },
    #[error("relation of arity {arity} exceeds the requested maximum {max}")]
    RelationTooLarge { arity: usize, max: usize },
    #[error("requested arity {requested} exceeds the cap {cap}")]
    ArityCap { requested: usize, cap: usize },
    #[error(transparent)]
    Symmetrize(#[from] SymmetrizeError),
    #[error("certificate does not replay: {0}")]
    BadCertificate(String),
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetrizeError {
    #[error("term is not multilinear: {0}")]
    NotMultilinear(String),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("identity uses variables that are not x1..x{0}")]
    NonContiguous(usize),
    #[error("operation `{0}` has no shuffle generator in this encoding")]
    Unencoded(String),
    #[error(transparent)]
    Term(#[from] TermError),
}
