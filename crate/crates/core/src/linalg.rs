//! Sparse Gaussian elimination over the monomial basis of one arity.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::poly::{Accumulator, Polynomial};
use crate::tree::ShuffleTree;

/// Row echelon form keyed by pivot (leading) monomial; every row is monic.
#[derive(Debug, Clone)]
pub struct Echelon {
    arity: usize,
    rows: BTreeMap<ShuffleTree, Polynomial>,
}

impl Echelon {
    pub fn new(arity: usize) -> Self {
        Echelon {
            arity,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, m: &ShuffleTree) -> bool {
        self.rows.contains_key(m)
    }

    /// Adds `p` to the row space. Returns false if it was already in the span.
    pub fn insert(&mut self, p: &Polynomial) -> bool {
        assert_eq!(p.arity(), self.arity, "echelon arity");
        let mut acc = Accumulator::from_poly(p);
        loop {
            let Some((lead, c)) = acc.monomials_desc().next().map(|(m, c)| (m.clone(), c.clone())) else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(row) => acc.add_poly(row, &-c),
                None => {
                    let row = acc.finish().monic();
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Eliminates every pivot monomial from `p`.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut acc = Accumulator::from_poly(p);
        self.reduce_acc(&mut acc, None);
        acc.finish()
    }

    fn reduce_acc(&self, acc: &mut Accumulator, below: Option<&ShuffleTree>) {
        let mut bound: Bound<ShuffleTree> = match below {
            Some(m) => Bound::Excluded(m.clone()),
            None => Bound::Unbounded,
        };
        loop {
            // largest monomial of acc under the bound that is a pivot
            let next = acc
                .range_desc((Bound::Unbounded, bound.clone()))
                .find(|(m, _)| self.rows.contains_key(*m))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = next else { break };
            let row = &self.rows[&m];
            acc.add_poly(row, &-c);
            bound = Bound::Excluded(m);
        }
    }

    /// Fully reduced rows, sorted by pivot descending.
    pub fn into_reduced_rows(self) -> Vec<Polynomial> {
        let mut done = Echelon::new(self.arity);
        for (pivot, row) in self.rows.into_iter() {
            let mut acc = Accumulator::from_poly(&row);
            done.reduce_acc(&mut acc, Some(&pivot));
            let row = acc.finish();
            debug_assert!(row.leading().map(|t| &t.monomial) == Some(&pivot));
            done.rows.insert(pivot, row);
        }
        done.rows.into_values().rev().collect()
    }
}

/// Rank of a family of polynomials of one arity.
pub fn rank(arity: usize, polys: &[Polynomial]) -> usize {
    let mut e = Echelon::new(arity);
    polys.iter().filter(|p| e.insert(p)).count()
}

/// True when the two families span the same space.
pub fn same_span(arity: usize, a: &[Polynomial], b: &[Polynomial]) -> bool {
    let ra = rank(arity, a);
    let rb = rank(arity, b);
    let both: Vec<Polynomial> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(arity, &both) == ra
}
