//! Gröbner bases for binary shuffle operads presented by generators and
//! multilinear identities, with dimension counts, identity certificates and
//! a differential Poisson zero test for Gelfand–Dorfman expressions.

pub mod cli;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod poisder;
pub mod poly;
pub mod presentation;
pub mod symmetrize;
pub mod tree;

pub use engine::{complete, normal_form, verify_identity, CompletionOptions, GroebnerBasis, RewriteRule, Verdict};
pub use error::{EngineError, SymmetrizeError, TermError};
pub use poly::{Polynomial, Term, Q};
pub use presentation::{builtin, library, library_identity, Presentation};
pub use symmetrize::{Encoding, Expr, IdentityExpr, SymbolicOp, Symmetry};
pub use tree::{compare, enumerate_monomials, shuffle_compose, validate_shuffle, Alphabet, ShuffleGenerator, ShuffleTree};
