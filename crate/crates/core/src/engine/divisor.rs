//! Operadic divisibility: where a monomial occurs inside a larger one, and
//! substituting at such an occurrence.

use serde::{Deserialize, Serialize};

use crate::poly::{Polynomial, Term};
use crate::tree::{is_node, node_gen, Layout, ShuffleTree};

/// One embedding of a divisor into a monomial.
///
/// Positions index the preorder code of the divided monomial. `hanging[k]`
/// is the subtree plugged into leaf `k + 1` of the divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub root: usize,
    pub nodes: Vec<usize>,
    pub hanging: Vec<usize>,
}

impl Occurrence {
    /// Bit set of the matched internal nodes.
    pub fn node_mask(&self) -> u32 {
        self.nodes.iter().fold(0, |m, &i| m | (1 << i))
    }

    pub fn shares_node(&self, other: &Occurrence) -> bool {
        self.node_mask() & other.node_mask() != 0
    }
}

/// Mask of every internal node of `m`.
pub(crate) fn internal_mask(m: &ShuffleTree) -> u32 {
    m.code()
        .iter()
        .enumerate()
        .filter(|(_, b)| is_node(**b))
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Tries to match `pattern` with its root at position `at` of `m`.
pub(crate) fn match_at(pattern: &ShuffleTree, m: &ShuffleTree, layout: &Layout, at: usize) -> Option<Occurrence> {
    let p = pattern.code();
    let c = m.code();
    let mut nodes = Vec::with_capacity(pattern.weight());
    let mut hanging = vec![usize::MAX; pattern.arity()];
    fn go(
        p: &[u8],
        pi: usize,
        c: &[u8],
        ci: usize,
        layout: &Layout,
        nodes: &mut Vec<usize>,
        hanging: &mut [usize],
    ) -> Option<usize> {
        if !is_node(p[pi]) {
            hanging[p[pi] as usize - 1] = ci;
            return Some(pi + 1);
        }
        if !is_node(c[ci]) || node_gen(c[ci]) != node_gen(p[pi]) {
            return None;
        }
        nodes.push(ci);
        let pr = go(p, pi + 1, c, ci + 1, layout, nodes, hanging)?;
        go(p, pr, c, layout.right(ci), layout, nodes, hanging)
    }
    go(p, 0, c, at, layout, &mut nodes, &mut hanging)?;
    // the induced relabelling must reproduce the divisor's leaf labels
    if hanging.windows(2).all(|w| layout.min[w[0]] < layout.min[w[1]]) {
        Some(Occurrence {
            root: at,
            nodes,
            hanging,
        })
    } else {
        None
    }
}

/// All embeddings of `lead` into `m`, by root position.
pub fn find_divisor_embeddings(lead: &ShuffleTree, m: &ShuffleTree) -> Vec<Occurrence> {
    if lead.arity() > m.arity() || lead.weight() == 0 {
        return Vec::new();
    }
    let layout = Layout::of(m.code());
    let root = lead.code()[0];
    m.code()
        .iter()
        .enumerate()
        .filter(|(_, b)| **b == root)
        .filter_map(|(i, _)| match_at(lead, m, &layout, i))
        .collect()
}

/// Replaces the divisor at `occ` by `replacement` (same arity as the divisor).
pub(crate) fn substitute(m: &ShuffleTree, layout: &Layout, occ: &Occurrence, replacement: &ShuffleTree) -> ShuffleTree {
    let c = m.code();
    let mut code = Vec::with_capacity(c.len() + replacement.code().len());
    code.extend_from_slice(&c[..occ.root]);
    for &b in replacement.code() {
        if is_node(b) {
            code.push(b);
        } else {
            let h = occ.hanging[b as usize - 1];
            code.extend_from_slice(&c[h..layout.end[h]]);
        }
    }
    code.extend_from_slice(&c[layout.end[occ.root]..]);
    ShuffleTree::from_code_unchecked(code)
}

pub fn rewrite_monomial(m: &ShuffleTree, occ: &Occurrence, replacement: &ShuffleTree) -> ShuffleTree {
    substitute(m, &Layout::of(m.code()), occ, replacement)
}

/// Substitutes every term of `replacement` at `occ`.
pub fn rewrite_with(m: &ShuffleTree, occ: &Occurrence, replacement: &Polynomial) -> Polynomial {
    let layout = Layout::of(m.code());
    let mut terms: Vec<Term> = replacement
        .terms()
        .iter()
        .map(|t| Term {
            coeff: t.coeff.clone(),
            monomial: substitute(m, &layout, occ, &t.monomial),
        })
        .collect();
    // substitution is monotone in the order; sorting is a no-op kept for safety
    terms.sort_by(|a, b| b.monomial.cmp(&a.monomial));
    Polynomial::from_sorted_unchecked(m.arity(), terms)
}
