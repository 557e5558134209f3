//! Exact-rational linear combinations of tree monomials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::TermError;
use crate::tree::{Alphabet, GenId, ShuffleTree};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn format_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses `p`, `-p` or `p/q`. Denominator zero is rejected.
pub fn parse_q(s: &str) -> Option<Q> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let n_body = n.strip_prefix(['-', '+']).unwrap_or(n);
    if !digits(n_body) {
        return None;
    }
    let num: BigInt = n.parse().ok()?;
    let den: BigInt = match d {
        Some(d) if digits(d) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Q,
    pub monomial: ShuffleTree,
}

/// Terms strictly descending in the monomial order, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: Vec::new(),
        }
    }

    pub fn monomial(m: ShuffleTree) -> Self {
        Polynomial {
            arity: m.arity(),
            terms: vec![Term {
                coeff: Q::one(),
                monomial: m,
            }],
        }
    }

    /// Collects terms into canonical form: sorted, like terms merged, zeros
    /// dropped.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self, TermError>
    where
        I: IntoIterator<Item = (Q, ShuffleTree)>,
    {
        let mut acc = Accumulator::new(arity);
        for (c, m) in terms {
            if m.arity() != arity {
                return Err(TermError::ArityMismatch {
                    left: arity,
                    right: m.arity(),
                });
            }
            acc.add(m, &c);
        }
        Ok(acc.finish())
    }

    /// Builds from terms already sorted strictly descending and nonzero.
    pub(crate) fn from_sorted_unchecked(arity: usize, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].monomial > w[1].monomial));
        debug_assert!(terms.iter().all(|t| !t.coeff.is_zero() && t.monomial.arity() == arity));
        Polynomial { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn coeff_of(&self, m: &ShuffleTree) -> Q {
        self.terms
            .binary_search_by(|t| m.cmp(&t.monomial))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| Q::zero())
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), TermError> {
        if self.arity != other.arity {
            return Err(TermError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, TermError> {
        self.check_arity(other)?;
        Ok(self.combine(other, &Q::one()))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, TermError> {
        self.check_arity(other)?;
        Ok(self.combine(other, &-Q::one()))
    }

    /// `self + c * other`, merging the two sorted term lists.
    pub(crate) fn combine(&self, other: &Polynomial, c: &Q) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.monomial.cmp(&b.monomial),
                (Some(_), None) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Less,
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let b = &other.terms[j];
                    let coeff = &b.coeff * c;
                    if !coeff.is_zero() {
                        out.push(Term {
                            coeff,
                            monomial: b.monomial.clone(),
                        });
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let coeff = &self.terms[i].coeff + &other.terms[j].coeff * c;
                    if !coeff.is_zero() {
                        out.push(Term {
                            coeff,
                            monomial: self.terms[i].monomial.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            arity: self.arity,
            terms: out,
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    monomial: t.monomial.clone(),
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Q::one())
    }

    /// Scaled so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            Some(t) if !t.coeff.is_one() => self.scale(&t.coeff.recip()),
            _ => self.clone(),
        }
    }

    pub fn relabel_generators(&self, map: &[GenId]) -> Polynomial {
        Polynomial::from_terms(
            self.arity,
            self.terms
                .iter()
                .map(|t| (t.coeff.clone(), t.monomial.relabel_generators(map))),
        )
        .expect("relabelling keeps arity")
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = t.coeff.abs();
            match (i, neg) {
                (0, false) => {}
                (0, true) => out.push('-'),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            if !abs.is_one() {
                out.push_str(&format_q(&abs));
                out.push(' ');
            }
            out.push_str(&t.monomial.render(alphabet));
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, alphabet }
    }

    /// Parses the canonical rendering: `2 x(z(1 3) 2) - z(1 x(2 3))`, or `0`.
    /// A `*` between coefficient and monomial is accepted. `arity` is needed
    /// only to type the zero polynomial.
    pub fn parse(text: &str, alphabet: &Alphabet, arity: Option<usize>) -> Result<Polynomial, TermError> {
        let s = text.trim();
        if s == "0" {
            return arity
                .map(Polynomial::zero)
                .ok_or_else(|| TermError::Parse {
                    pos: 0,
                    msg: "cannot infer the arity of 0".into(),
                });
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut terms = Vec::new();
        let skip = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let mut sign = Q::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
                skip(&mut pos);
            } else if !terms.is_empty() {
                return Err(TermError::Parse {
                    pos,
                    msg: "expected `+` or `-`".into(),
                });
            }
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            let coeff = if start == pos {
                Q::one()
            } else {
                let lit = &s[start..pos];
                parse_q(lit).ok_or_else(|| TermError::Parse {
                    pos: start,
                    msg: format!("bad coefficient `{lit}`"),
                })?
            };
            skip(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip(&mut pos);
            }
            // the monomial runs to its balancing parenthesis
            let mstart = pos;
            let mut depth = 0i32;
            while pos < bytes.len() {
                match bytes[pos] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            pos += 1;
                            break;
                        }
                    }
                    b'+' | b'-' if depth == 0 => break,
                    _ => {}
                }
                pos += 1;
            }
            let m = ShuffleTree::parse(&s[mstart..pos], alphabet).map_err(|e| match e {
                TermError::Parse { pos: p, msg } => TermError::Parse { pos: mstart + p, msg },
                other => other,
            })?;
            terms.push((sign * coeff, m));
        }
        let arity = match (terms.first(), arity) {
            (Some((_, m)), _) => m.arity(),
            (None, Some(a)) => a,
            (None, None) => {
                return Err(TermError::Parse {
                    pos: 0,
                    msg: "empty polynomial".into(),
                })
            }
        };
        Polynomial::from_terms(arity, terms)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.render(self.alphabet))
    }
}

/// Mutable sparse sum used while rewriting.
#[derive(Debug, Clone)]
pub(crate) struct Accumulator {
    arity: usize,
    map: BTreeMap<ShuffleTree, Q>,
}

impl Accumulator {
    pub fn new(arity: usize) -> Self {
        Accumulator {
            arity,
            map: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        Accumulator {
            arity: p.arity,
            map: p.terms.iter().map(|t| (t.monomial.clone(), t.coeff.clone())).collect(),
        }
    }

    pub fn add(&mut self, m: ShuffleTree, c: &Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.map.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_poly(&mut self, p: &Polynomial, c: &Q) {
        for t in &p.terms {
            self.add(t.monomial.clone(), &(&t.coeff * c));
        }
    }

    pub fn range_desc<R: std::ops::RangeBounds<ShuffleTree>>(
        &self,
        range: R,
    ) -> impl Iterator<Item = (&ShuffleTree, &Q)> {
        self.map.range(range).rev()
    }

    pub fn monomials_desc(&self) -> impl Iterator<Item = (&ShuffleTree, &Q)> {
        self.map.iter().rev()
    }

    pub fn finish(self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .map
                .into_iter()
                .rev()
                .map(|(monomial, coeff)| Term { coeff, monomial })
                .collect(),
        }
    }
}
