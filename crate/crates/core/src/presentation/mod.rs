//! Operad presentations: symbolic operations plus named multilinear
//! identities, written in the `.opd` text format.

mod parser;

use thiserror::Error;

pub use parser::{parse, parse_with_ops, SourceError};

use crate::error::SymmetrizeError;
use crate::poly::Polynomial;
use crate::symmetrize::{Encoding, IdentityExpr, SymbolicOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub ops: Vec<SymbolicOp>,
    pub identities: Vec<IdentityExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown presentation `{0}`")]
    UnknownPresentation(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

const SOURCES: &[(&str, &str)] = &[
    ("novikov", include_str!("../../presentations/novikov.opd")),
    ("gd", include_str!("../../presentations/gd.opd")),
    ("com-gd", include_str!("../../presentations/com-gd.opd")),
    ("tp", include_str!("../../presentations/tp.opd")),
    ("lie", include_str!("../../presentations/lie.opd")),
    ("com", include_str!("../../presentations/com.opd")),
    ("as", include_str!("../../presentations/as.opd")),
];

const LIBRARY: &str = include_str!("../../presentations/library.opd");

/// Names accepted by [`builtin`].
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

/// DSL source of a built-in presentation.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin(name: &str) -> Result<Presentation, RegistryError> {
    let src = builtin_source(name).ok_or_else(|| RegistryError::UnknownPresentation(name.to_string()))?;
    Ok(parse(src).expect("built-in presentations parse"))
}

/// The identity library: operation declarations plus every named identity.
pub fn library() -> Presentation {
    parse(LIBRARY).expect("identity library parses")
}

pub fn library_identity(name: &str) -> Result<IdentityExpr, RegistryError> {
    library()
        .identity(name)
        .cloned()
        .ok_or_else(|| RegistryError::UnknownIdentity(name.to_string()))
}

impl Presentation {
    pub fn op(&self, name: &str) -> Option<&SymbolicOp> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn identity(&self, name: &str) -> Option<&IdentityExpr> {
        self.identities.iter().find(|i| i.name == name)
    }

    pub fn encoding(&self, precedence: Option<&[String]>) -> Result<Encoding, SymmetrizeError> {
        Encoding::new(&self.ops, precedence)
    }

    /// Shuffle relations generated by all identities.
    pub fn relations(&self, encoding: &Encoding) -> Result<Vec<Polynomial>, SymmetrizeError> {
        let mut out = Vec::new();
        for id in &self.identities {
            out.extend(encoding.multilinear_orbit(id)?);
        }
        Ok(out)
    }

    /// Largest arity among the identities.
    pub fn max_identity_arity(&self) -> usize {
        self.identities.iter().map(IdentityExpr::arity).max().unwrap_or(0)
    }

    /// DSL text that parses back to this presentation.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for op in &self.ops {
            s.push_str(&format!("op {} : {}\n", op.name, op.symmetry.keyword()));
        }
        for id in &self.identities {
            s.push_str(&format!("id {} : {} = 0\n", id.name, id.render_sum()));
        }
        s
    }
}
