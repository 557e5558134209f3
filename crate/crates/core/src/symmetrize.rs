//! From multilinear identities over symmetric operations to relations of
//! the shuffle operad.
//!
//! Each plain operation becomes a pair of shuffle generators, `op` and its
//! transpose `op'` with `op(2 1) = op'(1 2)`. Symmetric and antisymmetric
//! operations keep one generator; swapping their arguments costs a sign for
//! the antisymmetric ones.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::SymmetrizeError;
use crate::linalg::Echelon;
use crate::poly::{format_q, Polynomial, Q};
use crate::tree::{node_byte, Alphabet, GenId, ShuffleGenerator, ShuffleTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Plain,
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn keyword(self) -> &'static str {
        match self {
            Symmetry::Plain => "plain",
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicOp {
    pub name: String,
    pub symmetry: Symmetry,
}

impl SymbolicOp {
    pub fn new(name: impl Into<String>, symmetry: Symmetry) -> Self {
        SymbolicOp {
            name: name.into(),
            symmetry,
        }
    }
}

/// A fully parenthesized term over variables `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(u8),
    App(String, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn app(op: &str, l: Expr, r: Expr) -> Expr {
        Expr::App(op.to_string(), Box::new(l), Box::new(r))
    }

    pub fn vars(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.collect_vars(&mut v);
        v
    }

    fn collect_vars(&self, out: &mut Vec<u8>) {
        match self {
            Expr::Var(i) => out.push(*i),
            Expr::App(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn count_ops(&self, op: &str) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::App(o, l, r) => (o == op) as usize + l.count_ops(op) + r.count_ops(op),
        }
    }

    pub fn ops(&self) -> Vec<&str> {
        match self {
            Expr::Var(_) => Vec::new(),
            Expr::App(o, l, r) => {
                let mut v = vec![o.as_str()];
                v.extend(l.ops());
                v.extend(r.ops());
                v
            }
        }
    }

    /// Renames variable `xi` to `x(perm[i-1])`.
    pub fn permute(&self, perm: &[u8]) -> Expr {
        match self {
            Expr::Var(i) => Expr::Var(perm[*i as usize - 1]),
            Expr::App(o, l, r) => Expr::App(o.clone(), Box::new(l.permute(perm)), Box::new(r.permute(perm))),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::App(o, l, r) => write!(f, "{o}({l}, {r})"),
        }
    }
}

/// A named linear combination of multilinear terms on a common variable set
/// `x1..xn`, read as `sum = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityExpr {
    pub name: String,
    terms: Vec<(Q, Expr)>,
    arity: usize,
}

impl IdentityExpr {
    pub fn new(name: impl Into<String>, terms: Vec<(Q, Expr)>) -> Result<Self, SymmetrizeError> {
        let terms: Vec<(Q, Expr)> = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        let mut arity = 0;
        for (k, (_, e)) in terms.iter().enumerate() {
            let mut vars = e.vars();
            vars.sort_unstable();
            if vars.windows(2).any(|w| w[0] == w[1]) {
                return Err(SymmetrizeError::NotMultilinear(e.to_string()));
            }
            if vars.iter().enumerate().any(|(i, v)| *v as usize != i + 1) {
                return Err(SymmetrizeError::NonContiguous(vars.len()));
            }
            if k == 0 {
                arity = vars.len();
            } else if vars.len() != arity {
                return Err(SymmetrizeError::NotMultilinear(format!(
                    "`{e}` uses {} variables, expected {arity}",
                    vars.len()
                )));
            }
        }
        Ok(IdentityExpr {
            name: name.into(),
            terms,
            arity,
        })
    }

    pub fn terms(&self) -> &[(Q, Expr)] {
        &self.terms
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn permute(&self, perm: &[u8]) -> IdentityExpr {
        IdentityExpr {
            name: self.name.clone(),
            terms: self.terms.iter().map(|(c, e)| (c.clone(), e.permute(perm))).collect(),
            arity: self.arity,
        }
    }

    /// DSL rendering of the left-hand side, `... = 0` implied.
    pub fn render_sum(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if abs != Q::from_integer(1.into()) {
                s.push_str(&format_q(&abs));
                s.push('*');
            }
            s.push_str(&e.to_string());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct OpSlot {
    op: SymbolicOp,
    gen: GenId,
    twin: Option<GenId>,
}

/// The shuffle generators of a set of symbolic operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    alphabet: Alphabet,
    slots: Vec<OpSlot>,
}

pub fn twin_name(op: &str) -> String {
    format!("{op}'")
}

impl Encoding {
    /// Generators in declaration order (`op` then `op'` for plain ops),
    /// optionally re-ranked by `precedence` (lowest first).
    pub fn new(ops: &[SymbolicOp], precedence: Option<&[String]>) -> Result<Self, SymmetrizeError> {
        let mut gens = Vec::new();
        for op in ops {
            gens.push(ShuffleGenerator::binary(op.name.clone()));
            if op.symmetry == Symmetry::Plain {
                gens.push(ShuffleGenerator::binary(twin_name(&op.name)));
            }
        }
        let declared = Alphabet::new(gens)?;
        let alphabet = match precedence {
            Some(p) => declared.reorder(p)?.0,
            None => declared,
        };
        let slots = ops
            .iter()
            .map(|op| OpSlot {
                op: op.clone(),
                gen: alphabet.lookup(&op.name).unwrap(),
                twin: (op.symmetry == Symmetry::Plain).then(|| alphabet.lookup(&twin_name(&op.name)).unwrap()),
            })
            .collect();
        Ok(Encoding { alphabet, slots })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn ops(&self) -> impl Iterator<Item = &SymbolicOp> {
        self.slots.iter().map(|s| &s.op)
    }

    fn slot(&self, name: &str) -> Result<&OpSlot, SymmetrizeError> {
        self.slots
            .iter()
            .find(|s| s.op.name == name)
            .ok_or_else(|| SymmetrizeError::UnknownOp(name.to_string()))
    }

    /// Shuffle form of a multilinear term and the sign picked up on the way.
    pub fn to_shuffle(&self, term: &Expr) -> Result<(i8, ShuffleTree), SymmetrizeError> {
        let mut vars = term.vars();
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return Err(SymmetrizeError::NotMultilinear(term.to_string()));
        }
        if vars.iter().enumerate().any(|(i, v)| *v as usize != i + 1) {
            return Err(SymmetrizeError::NonContiguous(vars.len()));
        }
        let (sign, code, _) = self.shuffle_code(term)?;
        Ok((sign, ShuffleTree::from_code(code)?))
    }

    fn shuffle_code(&self, term: &Expr) -> Result<(i8, Vec<u8>, u8), SymmetrizeError> {
        match term {
            Expr::Var(i) => Ok((1, vec![*i], *i)),
            Expr::App(op, l, r) => {
                let slot = self.slot(op)?;
                let (sl, cl, ml) = self.shuffle_code(l)?;
                let (sr, cr, mr) = self.shuffle_code(r)?;
                let sign = sl * sr;
                let (gen, sign, first, second) = if ml < mr {
                    (slot.gen, sign, cl, cr)
                } else {
                    match slot.op.symmetry {
                        Symmetry::Symmetric => (slot.gen, sign, cr, cl),
                        Symmetry::Antisymmetric => (slot.gen, -sign, cr, cl),
                        Symmetry::Plain => (slot.twin.unwrap(), sign, cr, cl),
                    }
                };
                let mut code = Vec::with_capacity(1 + first.len() + second.len());
                code.push(node_byte(gen));
                code.extend(first);
                code.extend(second);
                Ok((sign, code, ml.min(mr)))
            }
        }
    }

    /// The identity itself as a shuffle polynomial.
    pub fn polynomial(&self, identity: &IdentityExpr) -> Result<Polynomial, SymmetrizeError> {
        let mut terms = Vec::with_capacity(identity.terms().len());
        for (c, e) in identity.terms() {
            let (sign, m) = self.to_shuffle(e)?;
            terms.push((if sign < 0 { -c.clone() } else { c.clone() }, m));
        }
        Ok(Polynomial::from_terms(identity.arity(), terms)?)
    }

    /// Shuffle relations of every variable permutation of `identity`, pruned
    /// to a linearly independent generating set of their span.
    pub fn multilinear_orbit(&self, identity: &IdentityExpr) -> Result<Vec<Polynomial>, SymmetrizeError> {
        let n = identity.arity();
        let mut echelon = Echelon::new(n);
        let mut out = Vec::new();
        for perm in permutations(n) {
            let p = self.polynomial(&identity.permute(&perm))?;
            if echelon.insert(&p) {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// All permutations of 1..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (1..=n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}
