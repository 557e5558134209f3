//! Zero test for Gelfand–Dorfman expressions after the map into Poisson
//! algebras with a derivation: `a ∘ b ↦ a·d(b)`, `[a, b] ↦ {a, b}`.
//!
//! The free differential Poisson algebra on `x1..xn` is the free Poisson
//! algebra on the letters `d^k(xi)`, that is `S(Lie(L))`. Each Lie factor is
//! stored through its expansion in the tensor algebra, so an element lives
//! in `S(T(L))`, into which `S(Lie(L))` embeds. Distinct multisets of words
//! are linearly independent there, which makes the zero test exact.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{format_q, Q};
use crate::symmetrize::{Expr, IdentityExpr, SymbolicOp, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TauError {
    #[error("operation `{0}` is not declared")]
    UnknownOp(String),
    #[error("operation `{0}` is symmetric; only a plain product and an antisymmetric bracket have a τ-image")]
    SymmetricOp(String),
    #[error("expression is not multilinear: {0}")]
    NotMultilinear(String),
}

/// `d^order(x_var)`; ordered by `(var, order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivedLetter {
    pub var: u8,
    pub order: u8,
}

impl fmt::Display for DerivedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            0 => write!(f, "x{}", self.var),
            1 => write!(f, "d(x{})", self.var),
            k => write!(f, "d^{k}(x{})", self.var),
        }
    }
}

/// An associative word, one coordinate of a Lie factor.
pub type Word = Vec<DerivedLetter>;

/// Commutative product of words.
pub type PoisMonomial = Vec<Word>;

/// A linear combination of sorted word multisets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PoisElement {
    terms: BTreeMap<PoisMonomial, Q>,
}

impl PoisElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn letter(var: u8) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![vec![DerivedLetter { var, order: 0 }]], Q::one());
        PoisElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PoisMonomial, &Q)> {
        self.terms.iter()
    }

    fn add_term(&mut self, mut m: PoisMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &PoisElement) -> PoisElement {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &PoisElement) -> PoisElement {
        self.combine(other, &-Q::one())
    }

    fn combine(&self, other: &PoisElement, c: &Q) -> PoisElement {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> PoisElement {
        let mut out = PoisElement::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Commutative product.
    pub fn mul(&self, other: &PoisElement) -> PoisElement {
        let mut out = PoisElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                m.extend(b.iter().cloned());
                out.add_term(m, x * y);
            }
        }
        out
    }

    /// Poisson bracket: `{Πa_i, Πb_j} = Σ (a_i b_j − b_j a_i) Π_{k≠i} a_k Π_{l≠j} b_l`.
    pub fn bracket(&self, other: &PoisElement) -> PoisElement {
        let mut out = PoisElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let c = x * y;
                for i in 0..a.len() {
                    for j in 0..b.len() {
                        let mut rest: Vec<Word> = Vec::with_capacity(a.len() + b.len() - 1);
                        rest.extend(a.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, w)| w.clone()));
                        rest.extend(b.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, w)| w.clone()));
                        let ab: Word = a[i].iter().chain(&b[j]).copied().collect();
                        let ba: Word = b[j].iter().chain(&a[i]).copied().collect();
                        let mut m1 = rest.clone();
                        m1.push(ab);
                        out.add_term(m1, c.clone());
                        let mut m2 = rest;
                        m2.push(ba);
                        out.add_term(m2, -c.clone());
                    }
                }
            }
        }
        out
    }

    /// The derivation, raising one letter's order at a time.
    pub fn derive(&self) -> PoisElement {
        let mut out = PoisElement::zero();
        for (m, c) in &self.terms {
            for (i, w) in m.iter().enumerate() {
                for j in 0..w.len() {
                    let mut m2 = m.clone();
                    m2[i][j].order += 1;
                    out.add_term(m2, c.clone());
                }
            }
        }
        out
    }

    /// Total derivation order of each monomial.
    pub fn derivation_orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms
            .keys()
            .map(|m| m.iter().flatten().map(|l| l.order as usize).sum())
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            s.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let abs = if neg { -c.clone() } else { c.clone() };
            if !abs.is_one() {
                s.push_str(&format_q(&abs));
                s.push(' ');
            }
            let factors: Vec<String> = m
                .iter()
                .map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>().join(""))
                .map(|w| if m.len() > 1 { format!("[{w}]") } else { w })
                .collect();
            s.push_str(&factors.join(""));
        }
        s
    }
}

/// A multilinear expression in a product `∘` and a bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GdExpr {
    Var(u8),
    Circ(Box<GdExpr>, Box<GdExpr>),
    Bracket(Box<GdExpr>, Box<GdExpr>),
}

impl GdExpr {
    /// Plain operations play `∘`, antisymmetric ones the bracket.
    pub fn from_expr(e: &Expr, ops: &[SymbolicOp]) -> Result<GdExpr, TauError> {
        Ok(match e {
            Expr::Var(i) => GdExpr::Var(*i),
            Expr::App(name, l, r) => {
                let op = ops
                    .iter()
                    .find(|o| &o.name == name)
                    .ok_or_else(|| TauError::UnknownOp(name.clone()))?;
                let (l, r) = (Box::new(Self::from_expr(l, ops)?), Box::new(Self::from_expr(r, ops)?));
                match op.symmetry {
                    Symmetry::Plain => GdExpr::Circ(l, r),
                    Symmetry::Antisymmetric => GdExpr::Bracket(l, r),
                    Symmetry::Symmetric => return Err(TauError::SymmetricOp(name.clone())),
                }
            }
        })
    }

    pub fn circ_count(&self) -> usize {
        match self {
            GdExpr::Var(_) => 0,
            GdExpr::Circ(l, r) => 1 + l.circ_count() + r.circ_count(),
            GdExpr::Bracket(l, r) => l.circ_count() + r.circ_count(),
        }
    }

    fn vars(&self, out: &mut Vec<u8>) {
        match self {
            GdExpr::Var(i) => out.push(*i),
            GdExpr::Circ(l, r) | GdExpr::Bracket(l, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }

    fn check_multilinear(&self) -> Result<(), TauError> {
        let mut v = Vec::new();
        self.vars(&mut v);
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(TauError::NotMultilinear(format!("{self:?}")));
        }
        Ok(())
    }
}

fn tau_rec(e: &GdExpr) -> PoisElement {
    match e {
        GdExpr::Var(i) => PoisElement::letter(*i),
        GdExpr::Circ(l, r) => tau_rec(l).mul(&tau_rec(r).derive()),
        GdExpr::Bracket(l, r) => tau_rec(l).bracket(&tau_rec(r)),
    }
}

/// τ-image of a multilinear expression.
pub fn tau_expand(e: &GdExpr) -> Result<PoisElement, TauError> {
    e.check_multilinear()?;
    let p = tau_rec(e);
    let k = e.circ_count();
    assert!(p.derivation_orders().all(|o| o == k), "derivation grading violated");
    Ok(p)
}

pub fn is_zero(p: &PoisElement) -> bool {
    p.is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauReport {
    pub identity: String,
    /// Derivation order of each term, in identity order.
    pub grading: Vec<usize>,
    pub zero: bool,
    /// Monomials summed over the terms' separate images.
    pub monomials_before: usize,
    /// Monomials of the collected image.
    pub monomials_after: usize,
    pub image: String,
}

/// τ-image of `sum = 0` with operation roles taken from `ops`.
pub fn tau_identity(identity: &IdentityExpr, ops: &[SymbolicOp]) -> Result<(PoisElement, TauReport), TauError> {
    let mut total = PoisElement::zero();
    let mut grading = Vec::new();
    let mut before = 0;
    for (c, e) in identity.terms() {
        let g = GdExpr::from_expr(e, ops)?;
        let img = tau_expand(&g)?;
        grading.push(g.circ_count());
        before += img.len();
        total = total.add(&img.scale(c));
    }
    let report = TauReport {
        identity: identity.name.clone(),
        grading,
        zero: total.is_zero(),
        monomials_before: before,
        monomials_after: total.len(),
        image: total.render(),
    };
    Ok((total, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{library, library_identity};

    fn v(i: u8) -> Box<GdExpr> {
        Box::new(GdExpr::Var(i))
    }

    #[test]
    fn commutator_of_circ_is_nonzero() {
        let a = tau_expand(&GdExpr::Circ(v(1), v(2))).unwrap();
        let b = tau_expand(&GdExpr::Circ(v(2), v(1))).unwrap();
        let diff = a.sub(&b);
        assert!(!is_zero(&diff));
        assert_eq!(diff.render(), "[x1][d(x2)] - [d(x1)][x2]");
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let a = tau_expand(&GdExpr::Bracket(v(1), v(2))).unwrap();
        let b = tau_expand(&GdExpr::Bracket(v(2), v(1))).unwrap();
        assert!(a.add(&b).is_zero());
        assert_eq!(a.render(), "x1x2 - x2x1");
    }

    #[test]
    fn library_verdicts() {
        let lib = library();
        for (name, zero) in [
            ("leftsym", true),
            ("rightcom", true),
            ("gd1", true),
            ("jacobi", true),
            ("spec1", true),
            ("spec2", true),
            ("comm", false),
            ("assoc", false),
        ] {
            let (_, r) = tau_identity(&library_identity(name).unwrap(), &lib.ops).unwrap();
            assert_eq!(r.zero, zero, "{name}: {}", r.image);
        }
    }

    #[test]
    fn grading_counts_products() {
        let (_, r) = tau_identity(&library_identity("spec2").unwrap(), &library().ops).unwrap();
        assert_eq!(r.grading, vec![2; 7]);
        assert!(r.monomials_before > r.monomials_after);
    }

    #[test]
    fn repeated_variable_rejected() {
        assert!(tau_expand(&GdExpr::Circ(v(1), v(1))).is_err());
    }

    #[test]
    fn symmetric_op_rejected() {
        let ops = [SymbolicOp::new("mul", Symmetry::Symmetric)];
        let e = Expr::app("mul", Expr::Var(1), Expr::Var(2));
        assert!(matches!(GdExpr::from_expr(&e, &ops), Err(TauError::SymmetricOp(_))));
    }
}
