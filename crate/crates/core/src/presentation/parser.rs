//! Parser for `.opd` presentation files.
//!
//! ```text
//! # comment
//! op mul : symmetric
//! op bra : antisymmetric
//! id tp-identity : 2*mul(bra(x1, x2), x3) = bra(mul(x1, x3), x2) + bra(x1, mul(x2, x3))
//! ```

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::Presentation;
use crate::error::SymmetrizeError;
use crate::poly::{parse_q, Q};
use crate::symmetrize::{Expr, IdentityExpr, SymbolicOp, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Number(s) => s.clone(),
            Tok::Sym(c) => c.to_string(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// `names` admits `-` inside identifiers, for identity names.
    fn next(&mut self, names: bool) -> Result<Spanned, SourceError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let Some(&c) = self.chars.peek() else {
            return Ok(Spanned {
                tok: Tok::Eof,
                line,
                column,
            });
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = self.chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || (names && c == '-') {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = self.chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            Tok::Number(s)
        } else if "()+-*/,:=".contains(c) {
            self.bump();
            Tok::Sym(c)
        } else {
            return Err(SourceError {
                line,
                column,
                message: "unexpected character".into(),
                token: c.to_string(),
            });
        };
        Ok(Spanned { tok, line, column })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<Spanned>,
    ops: Vec<SymbolicOp>,
    identities: Vec<IdentityExpr>,
}

fn err_at(at: &Spanned, message: impl Into<String>) -> SourceError {
    SourceError {
        line: at.line,
        column: at.column,
        message: message.into(),
        token: at.tok.text(),
    }
}

/// Parses a presentation.
pub fn parse(text: &str) -> Result<Presentation, SourceError> {
    parse_with_ops(text, &[])
}

/// Parses with `ops` already declared, as for identity files checked
/// against a known presentation.
pub fn parse_with_ops(text: &str, ops: &[SymbolicOp]) -> Result<Presentation, SourceError> {
    let mut p = Parser {
        lex: Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        },
        peeked: None,
        ops: ops.to_vec(),
        identities: Vec::new(),
    };
    loop {
        let t = p.next(false)?;
        match &t.tok {
            Tok::Eof => break,
            Tok::Ident(k) if k == "op" => p.op_decl()?,
            Tok::Ident(k) if k == "id" => p.id_decl()?,
            _ => return Err(err_at(&t, "expected `op` or `id`")),
        }
    }
    Ok(Presentation {
        ops: p.ops,
        identities: p.identities,
    })
}

impl Parser<'_> {
    fn next(&mut self, names: bool) -> Result<Spanned, SourceError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex.next(names),
        }
    }

    fn peek(&mut self) -> Result<&Spanned, SourceError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex.next(false)?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn expect_sym(&mut self, c: char) -> Result<Spanned, SourceError> {
        let t = self.next(false)?;
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(err_at(&t, format!("expected `{c}`")))
        }
    }

    fn name(&mut self, what: &str, dashes: bool) -> Result<(String, Spanned), SourceError> {
        let t = self.next(dashes)?;
        match &t.tok {
            Tok::Ident(s) if s != "op" && s != "id" => Ok((s.clone(), t.clone())),
            _ => Err(err_at(&t, format!("expected {what}"))),
        }
    }

    fn op_decl(&mut self) -> Result<(), SourceError> {
        let (name, at) = self.name("an operation name", false)?;
        if is_variable(&name).is_some() {
            return Err(err_at(&at, "operation names may not look like variables"));
        }
        if self.ops.iter().any(|o| o.name == name) {
            return Err(err_at(&at, "operation declared twice"));
        }
        self.expect_sym(':')?;
        let (kind, kat) = self.name("plain, symmetric or antisymmetric", false)?;
        let symmetry = match kind.as_str() {
            "plain" => Symmetry::Plain,
            "symmetric" => Symmetry::Symmetric,
            "antisymmetric" => Symmetry::Antisymmetric,
            _ => return Err(err_at(&kat, "expected plain, symmetric or antisymmetric")),
        };
        self.ops.push(SymbolicOp { name, symmetry });
        Ok(())
    }

    fn id_decl(&mut self) -> Result<(), SourceError> {
        let (name, at) = self.name("an identity name", true)?;
        if self.identities.iter().any(|i| i.name == name) {
            return Err(err_at(&at, "identity declared twice"));
        }
        self.expect_sym(':')?;
        let mut terms = self.sum()?;
        self.expect_sym('=')?;
        let rhs = self.sum()?;
        terms.extend(rhs.into_iter().map(|(c, e)| (-c, e)));
        let identity = IdentityExpr::new(name, terms).map_err(|e| match e {
            SymmetrizeError::NonContiguous(n) => err_at(&at, format!("variables must be exactly x1..x{n}")),
            other => err_at(&at, other.to_string()),
        })?;
        if identity.terms().is_empty() {
            return Err(err_at(&at, "identity is trivially zero"));
        }
        self.identities.push(identity);
        Ok(())
    }

    /// `[+-] term {(+|-) term}`; a lone `0` is the empty sum.
    fn sum(&mut self) -> Result<Vec<(Q, Expr)>, SourceError> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let t = self.peek()?.clone();
            let sign = match t.tok {
                Tok::Sym('+') => Some(Q::one()),
                Tok::Sym('-') => Some(-Q::one()),
                _ => None,
            };
            match sign {
                Some(s) => {
                    self.next(false)?;
                    let (c, e) = self.term()?;
                    if let Some(e) = e {
                        out.push((s * c, e));
                    }
                }
                None if first => {
                    let (c, e) = self.term()?;
                    match e {
                        Some(e) => out.push((c, e)),
                        None if c.is_zero() => {}
                        None => return Err(err_at(&t, "a constant is not a term")),
                    }
                }
                None => return Ok(out),
            }
            first = false;
        }
    }

    /// `[rational '*'] atom`, or a bare `0`.
    fn term(&mut self) -> Result<(Q, Option<Expr>), SourceError> {
        let t = self.peek()?.clone();
        let coeff = if let Tok::Number(n) = &t.tok {
            self.next(false)?;
            let mut lit = n.clone();
            if self.peek()?.tok == Tok::Sym('/') {
                self.next(false)?;
                let d = self.next(false)?;
                match d.tok {
                    Tok::Number(d) => {
                        lit.push('/');
                        lit.push_str(&d);
                    }
                    _ => return Err(err_at(&d, "malformed rational")),
                }
            }
            let c = parse_q(&lit).ok_or_else(|| SourceError {
                line: t.line,
                column: t.column,
                message: "malformed rational".into(),
                token: lit.clone(),
            })?;
            if self.peek()?.tok != Tok::Sym('*') {
                if c.is_zero() {
                    return Ok((c, None));
                }
                let at = self.peek()?.clone();
                return Err(err_at(&at, "expected `*` after a coefficient"));
            }
            self.next(false)?;
            c
        } else {
            Q::one()
        };
        let start = self.peek()?.clone();
        let e = self.atom()?;
        let mut vars = e.vars();
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(SourceError {
                line: start.line,
                column: start.column,
                message: "repeated variable in a term".into(),
                token: format!("x{}", w[0]),
            });
        }
        Ok((coeff, Some(e)))
    }

    fn atom(&mut self) -> Result<Expr, SourceError> {
        let t = self.next(false)?;
        let Tok::Ident(name) = &t.tok else {
            return Err(err_at(&t, "expected a variable or an application"));
        };
        if self.peek()?.tok != Tok::Sym('(') {
            return match is_variable(name) {
                None => Err(err_at(&t, "unknown variable")),
                Some(0) => Err(err_at(&t, "variables are numbered from x1")),
                Some(i) if i > 127 => Err(err_at(&t, "variable index too large")),
                Some(i) => Ok(Expr::Var(i as u8)),
            };
        }
        if !self.ops.iter().any(|o| &o.name == name) {
            return Err(err_at(&t, "unknown operation"));
        }
        self.next(false)?;
        let mut args = vec![self.atom()?];
        loop {
            let sep = self.next(false)?;
            match sep.tok {
                Tok::Sym(',') => args.push(self.atom()?),
                Tok::Sym(')') => break,
                _ => return Err(err_at(&sep, "expected `,` or `)`")),
            }
        }
        if args.len() != 2 {
            return Err(err_at(&t, format!("operation takes 2 arguments, got {}", args.len())));
        }
        let r = args.pop().unwrap();
        let l = args.pop().unwrap();
        Ok(Expr::App(name.clone(), Box::new(l), Box::new(r)))
    }
}

/// `x12` -> Some(12).
fn is_variable(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TP: &str = "op mul : symmetric\nop bra : antisymmetric\n\
        id tp-identity : 2*mul(bra(x1, x2), x3) = bra(mul(x1, x3), x2) + bra(x1, mul(x2, x3))\n";

    #[test]
    fn tp_structure() {
        let p = parse(TP).unwrap();
        assert_eq!(p.ops.len(), 2);
        assert_eq!(p.identities.len(), 1);
        assert_eq!(p.identities[0].terms().len(), 3);
        assert_eq!(p.identities[0].arity(), 3);
    }

    #[test]
    fn repeated_variable() {
        let e = parse("op mul : symmetric\nid bad : mul(x1, x1) = 0").unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (2, "repeated variable in a term"));
        assert_eq!(e.token, "x1");
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("op mul : symmetric\nid a : foo(x1, x2) = 0", "unknown operation", 2, 8),
            ("op mul : symmetric\nid a : mul(x1, x2, x3) = 0", "operation takes 2 arguments, got 3", 2, 8),
            ("op mul : symmetric\nid a : mul(x1, x3) = 0", "variables must be exactly x1..x2", 2, 4),
            ("op mul : symmetric\nid a : 3/0*mul(x1, x2) = 0", "malformed rational", 2, 8),
            ("op mul : symmetric\nid a : 3/*mul(x1, x2) = 0", "malformed rational", 2, 10),
            ("op mul : commutative", "expected plain, symmetric or antisymmetric", 1, 10),
            ("op mul : plain\nop mul : plain", "operation declared twice", 2, 4),
            ("op mul : plain\nid a : mul(x1, y) = 0", "unknown variable", 2, 16),
        ];
        for (src, msg, line, col) in cases {
            let e = parse(src).unwrap_err();
            assert_eq!((e.message.as_str(), e.line, e.column), (msg, line, col), "{src}");
        }
    }

    #[test]
    fn comments_and_layout() {
        let src = "# a comment\nop   bra:antisymmetric # trailing\n\nid jacobi :\n  bra(bra(x1,x2),x3)\n + bra(bra(x2,x3),x1)\n + bra(bra(x3,x1),x2) = 0\n";
        let p = parse(src).unwrap();
        assert_eq!(p.identities[0].terms().len(), 3);
    }

    #[test]
    fn signs_and_fractions() {
        let p = parse("op m : plain\nid a : -m(x1, x2) + 1/2*m(x2, x1) = - 3*m(x1, x2)").unwrap();
        let c: Vec<String> = p.identities[0].terms().iter().map(|(c, _)| c.to_string()).collect();
        assert_eq!(c, vec!["-1", "1/2", "3"]);
    }
}
