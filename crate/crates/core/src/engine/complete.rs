//! Critical-pair completion, one arity at a time.
//!
//! At arity `a` every rule has arity below `a`, so each critical pair lives
//! on a monomial of arity `a` covered by two overlapping occurrences. We scan
//! all monomials of that arity, reduce the resulting S-polynomials modulo
//! the frozen lower rules and echelonize them; the echelon rows become the
//! new rules. Reduced row echelon form is unique, so the output does not
//! depend on scan order or worker count.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use log::{debug, info, warn};
use rayon::prelude::*;

use super::divisor::{find_divisor_embeddings, internal_mask, substitute, Occurrence};
use super::{GroebnerBasis, RewriteRule, RuleSet};
use crate::error::EngineError;
use crate::linalg::Echelon;
use crate::poly::{Accumulator, Polynomial};
use crate::tree::{enumerate_monomials, Alphabet, Layout, ShuffleTree, ARITY_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionOptions {
    pub max_arity: usize,
    pub workers: usize,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions {
            max_arity: 5,
            workers: 1,
        }
    }
}

/// A small common multiple of two leads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub monomial: ShuffleTree,
    pub first: Occurrence,
    pub second: Occurrence,
}

/// Monomials of arity at most `max_arity` built from exactly the union of
/// an occurrence of `r1.lead` and an overlapping occurrence of `r2.lead`.
pub fn common_multiples(
    alphabet: &Alphabet,
    r1: &RewriteRule,
    r2: &RewriteRule,
    max_arity: usize,
) -> Result<Vec<Overlap>, EngineError> {
    if max_arity > ARITY_CAP {
        return Err(EngineError::ArityCap {
            requested: max_arity,
            cap: ARITY_CAP,
        });
    }
    let (a1, a2) = (r1.arity(), r2.arity());
    let hi = max_arity.min(a1 + a2 - 2);
    let mut out = Vec::new();
    for n in a1.max(a2)..=hi {
        for m in enumerate_monomials(alphabet, n) {
            let full = internal_mask(&m);
            let e1 = find_divisor_embeddings(&r1.lead, &m);
            if e1.is_empty() {
                continue;
            }
            let e2 = find_divisor_embeddings(&r2.lead, &m);
            for o1 in &e1 {
                for o2 in &e2 {
                    let (k1, k2) = (o1.node_mask(), o2.node_mask());
                    if k1 & k2 == 0 || k1 | k2 != full || (r1 == r2 && o1 == o2) {
                        continue;
                    }
                    out.push(Overlap {
                        monomial: m.clone(),
                        first: o1.clone(),
                        second: o2.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Normal forms modulo a frozen rule set, memoized per monomial. The
/// reduction path is a pure function of the monomial, so concurrent
/// fills of the memo agree.
struct MemoNf<'a> {
    set: &'a RuleSet,
    memo: DashMap<ShuffleTree, Arc<Polynomial>>,
}

impl<'a> MemoNf<'a> {
    fn new(set: &'a RuleSet) -> Self {
        MemoNf {
            set,
            memo: DashMap::new(),
        }
    }

    fn monomial(&self, m: &ShuffleTree) -> Arc<Polynomial> {
        if let Some(hit) = self.memo.get(m) {
            return Arc::clone(hit.value());
        }
        let layout = Layout::of(m.code());
        let nf = match self.set.first_occurrence(m, &layout) {
            None => Polynomial::monomial(m.clone()),
            Some((r, occ)) => {
                let tail = &self.set.rules()[r].tail;
                let mut acc = Accumulator::new(m.arity());
                for t in tail.terms() {
                    let image = substitute(m, &layout, &occ, &t.monomial);
                    acc.add_poly(&self.monomial(&image), &t.coeff);
                }
                acc.finish()
            }
        };
        let nf = Arc::new(nf);
        self.memo.insert(m.clone(), Arc::clone(&nf));
        nf
    }

    fn rewrite_then_reduce(&self, m: &ShuffleTree, layout: &Layout, r: usize, occ: &Occurrence) -> Polynomial {
        let mut acc = Accumulator::new(m.arity());
        for t in self.set.rules()[r].tail.terms() {
            let image = substitute(m, layout, occ, &t.monomial);
            acc.add_poly(&self.monomial(&image), &t.coeff);
        }
        acc.finish()
    }

    fn poly(&self, p: &Polynomial) -> Polynomial {
        let mut acc = Accumulator::new(p.arity());
        for t in p.terms() {
            acc.add_poly(&self.monomial(&t.monomial), &t.coeff);
        }
        acc.finish()
    }
}

/// Reduced S-polynomials on one monomial. Covering overlapping pairs are
/// joined along a spanning forest, which spans every pairwise difference.
fn s_polynomials_on(m: &ShuffleTree, nf: &MemoNf<'_>) -> Vec<Polynomial> {
    let layout = Layout::of(m.code());
    let occ = nf.set.occurrences(m, &layout);
    if occ.len() < 2 {
        return Vec::new();
    }
    let full = internal_mask(m);
    let masks: Vec<u32> = occ.iter().map(|(_, o)| o.node_mask()).collect();
    let mut parent: Vec<usize> = (0..occ.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut edges = Vec::new();
    for i in 0..occ.len() {
        for j in i + 1..occ.len() {
            // disjoint occurrences give S-polynomials that reduce to zero
            if masks[i] & masks[j] == 0 || masks[i] | masks[j] != full {
                continue;
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                edges.push((i, j));
            }
        }
    }
    if edges.is_empty() {
        return Vec::new();
    }
    let mut images: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut image = |k: usize| -> Polynomial {
        images
            .entry(k)
            .or_insert_with(|| nf.rewrite_then_reduce(m, &layout, occ[k].0, &occ[k].1))
            .clone()
    };
    edges
        .into_iter()
        .filter_map(|(i, j)| {
            let s = image(i).sub(&image(j)).expect("same arity");
            (!s.is_zero()).then_some(s)
        })
        .collect()
}

/// Completes `relations` to a Gröbner basis certified through `max_arity`.
pub fn complete(alphabet: &Alphabet, relations: &[Polynomial], opts: CompletionOptions) -> Result<GroebnerBasis, EngineError> {
    if opts.max_arity > ARITY_CAP {
        return Err(EngineError::ArityCap {
            requested: opts.max_arity,
            cap: ARITY_CAP,
        });
    }
    let max_arity = opts.max_arity.max(1);
    let mut by_arity: BTreeMap<usize, Vec<&Polynomial>> = BTreeMap::new();
    for p in relations {
        if p.arity() > max_arity {
            return Err(EngineError::RelationTooLarge {
                arity: p.arity(),
                max: max_arity,
            });
        }
        if p.arity() < 2 {
            return Err(EngineError::Term(crate::error::TermError::Malformed(
                "relations must have arity at least 2".into(),
            )));
        }
        if p.is_zero() {
            warn!("dropping a zero relation of arity {}", p.arity());
            continue;
        }
        by_arity.entry(p.arity()).or_default().push(p);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .stack_size(64 << 20)
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;

    let mut set = RuleSet::default();
    for a in 2..=max_arity {
        let inputs = by_arity.get(&a).map(Vec::as_slice).unwrap_or(&[]);
        if set.is_empty() && inputs.is_empty() {
            continue;
        }
        let new_rules = pool.install(|| level(alphabet, &set, inputs, a));
        info!("arity {a}: {} new rules", new_rules.len());
        for r in new_rules {
            set.push(r);
        }
    }
    Ok(GroebnerBasis::from_parts(alphabet.clone(), set, max_arity))
}

fn level(alphabet: &Alphabet, set: &RuleSet, inputs: &[&Polynomial], arity: usize) -> Vec<RewriteRule> {
    let nf = MemoNf::new(set);
    let mut candidates: Vec<Polynomial> = Vec::new();
    for p in inputs {
        let r = nf.poly(p);
        if r.is_zero() {
            warn!("relation of arity {arity} reduces to zero modulo lower rules");
        } else {
            candidates.push(r);
        }
    }
    if !set.is_empty() {
        let monomials = enumerate_monomials(alphabet, arity);
        let found: Vec<Vec<Polynomial>> = monomials.par_iter().map(|m| s_polynomials_on(m, &nf)).collect();
        let count: usize = found.iter().map(Vec::len).sum();
        debug!("arity {arity}: {count} nonzero reduced S-polynomials");
        candidates.extend(found.into_iter().flatten());
    }
    let mut echelon = Echelon::new(arity);
    // shorter rows first keeps the elimination sparse
    candidates.sort_by_key(|p| p.len());
    for c in &candidates {
        echelon.insert(c);
    }
    echelon
        .into_reduced_rows()
        .iter()
        .filter_map(RewriteRule::from_relation)
        .collect()
}
