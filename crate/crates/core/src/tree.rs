//! Tree monomials of a binary shuffle operad.
//!
//! A [`ShuffleTree`] is stored as its preorder code: one byte per node,
//! internal nodes carry `0x80 | generator` and leaves carry their label.
//! Alongside the code we keep a sort key whose byte-lexicographic order is
//! the graded path-lexicographic monomial order, so comparing, hashing and
//! sorting monomials never has to walk the tree.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TermError;

/// Largest arity the engine will ever build monomials for.
pub const ARITY_CAP: usize = 7;

const NODE_BIT: u8 = 0x80;

/// Index of a generator inside an [`Alphabet`]. The index doubles as its
/// precedence rank: a larger id is a larger generator.
pub type GenId = u8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShuffleGenerator {
    pub name: String,
    pub arity: usize,
}

impl ShuffleGenerator {
    pub fn binary(name: impl Into<String>) -> Self {
        ShuffleGenerator {
            name: name.into(),
            arity: 2,
        }
    }
}

/// Generators ordered by ascending precedence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    gens: Vec<ShuffleGenerator>,
}

impl Alphabet {
    pub fn new(gens: Vec<ShuffleGenerator>) -> Result<Self, TermError> {
        if gens.len() >= NODE_BIT as usize {
            return Err(TermError::AlphabetTooLarge(gens.len()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.arity != 2 {
                return Err(TermError::UnsupportedArity {
                    name: g.name.clone(),
                    arity: g.arity,
                });
            }
            if !valid_generator_name(&g.name) {
                return Err(TermError::BadGeneratorName(g.name.clone()));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(TermError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Alphabet { gens })
    }

    /// Convenience constructor from binary generator names, lowest first.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, TermError> {
        Alphabet::new(
            names
                .iter()
                .map(|n| ShuffleGenerator::binary(n.as_ref()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[ShuffleGenerator] {
        &self.gens
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.gens.len()).map(|i| i as GenId)
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as GenId)
    }

    /// Re-rank the generators. `precedence` lists every generator name once,
    /// lowest first. Returns the new alphabet and the map old id -> new id.
    pub fn reorder<S: AsRef<str>>(&self, precedence: &[S]) -> Result<(Alphabet, Vec<GenId>), TermError> {
        if precedence.len() != self.gens.len() {
            return Err(TermError::BadPrecedence(format!(
                "expected {} generator names, got {}",
                self.gens.len(),
                precedence.len()
            )));
        }
        let mut map = vec![GenId::MAX; self.gens.len()];
        let mut gens = Vec::with_capacity(self.gens.len());
        for (rank, name) in precedence.iter().enumerate() {
            let old = self
                .lookup(name.as_ref())
                .ok_or_else(|| TermError::BadPrecedence(format!("unknown generator `{}`", name.as_ref())))?;
            if map[old as usize] != GenId::MAX {
                return Err(TermError::BadPrecedence(format!("`{}` listed twice", name.as_ref())));
            }
            map[old as usize] = rank as GenId;
            gens.push(self.gens[old as usize].clone());
        }
        Ok((Alphabet { gens }, map))
    }
}

pub(crate) fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// One child position of an internal node while building trees by hand.
#[derive(Debug, Clone)]
pub enum Child {
    Leaf(u8),
    Tree(ShuffleTree),
}

impl From<u8> for Child {
    fn from(l: u8) -> Self {
        Child::Leaf(l)
    }
}

impl From<ShuffleTree> for Child {
    fn from(t: ShuffleTree) -> Self {
        Child::Tree(t)
    }
}

/// A tree monomial whose leaves carry the labels 1..n and whose internal
/// nodes satisfy the shuffle condition.
#[derive(Clone)]
pub struct ShuffleTree {
    code: Box<[u8]>,
    key: Box<[u8]>,
}

impl PartialEq for ShuffleTree {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for ShuffleTree {}

impl std::hash::Hash for ShuffleTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl PartialOrd for ShuffleTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded path-lexicographic order. Arity first; then the root-to-leaf
/// generator words of leaves 1..n, each compared longer-first and then
/// letter by letter; then the planar reading of the leaf labels.
impl Ord for ShuffleTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Debug for ShuffleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_code(&self.code, &|g| format!("g{g}")))
    }
}

/// Preorder layout of a code: subtree end and minimal leaf per position.
pub(crate) struct Layout {
    pub end: Vec<usize>,
    pub min: Vec<u8>,
}

impl Layout {
    pub fn of(code: &[u8]) -> Layout {
        let mut end = vec![0; code.len()];
        let mut min = vec![0; code.len()];
        fn walk(code: &[u8], i: usize, end: &mut [usize], min: &mut [u8]) -> usize {
            if code[i] & NODE_BIT == 0 {
                end[i] = i + 1;
                min[i] = code[i];
            } else {
                let r = walk(code, i + 1, end, min);
                let e = walk(code, r, end, min);
                end[i] = e;
                min[i] = min[i + 1].min(min[r]);
            }
            end[i]
        }
        walk(code, 0, &mut end, &mut min);
        Layout { end, min }
    }

    /// Position of the right child of the internal node at `i`.
    pub fn right(&self, i: usize) -> usize {
        self.end[i + 1]
    }
}

pub(crate) fn is_node(b: u8) -> bool {
    b & NODE_BIT != 0
}

pub(crate) fn node_gen(b: u8) -> GenId {
    b & !NODE_BIT
}

pub(crate) fn node_byte(g: GenId) -> u8 {
    g | NODE_BIT
}

fn sort_key(code: &[u8]) -> Box<[u8]> {
    let n = code.iter().filter(|b| !is_node(**b)).count();
    let mut paths: Vec<Vec<u8>> = vec![Vec::new(); n + 1];
    let mut planar = Vec::with_capacity(n);
    let mut stack: Vec<(u8, u8)> = Vec::new(); // (generator, children still to visit)
    for &b in code {
        if is_node(b) {
            stack.push((node_gen(b), 2));
            continue;
        }
        paths[b as usize] = stack.iter().map(|(g, _)| *g).collect();
        planar.push(b);
        while let Some(top) = stack.last_mut() {
            top.1 -= 1;
            if top.1 == 0 {
                stack.pop();
            } else {
                break;
            }
        }
    }
    let mut key = Vec::with_capacity(1 + 2 * n + paths.iter().map(Vec::len).sum::<usize>());
    key.push(n as u8);
    for p in &paths[1..] {
        key.push(p.len() as u8);
        key.extend_from_slice(p);
    }
    key.extend_from_slice(&planar);
    key.into_boxed_slice()
}

impl ShuffleTree {
    /// Builds from a preorder code the caller knows to be valid.
    pub(crate) fn from_code_unchecked(code: Vec<u8>) -> Self {
        let key = sort_key(&code);
        ShuffleTree {
            code: code.into_boxed_slice(),
            key,
        }
    }

    /// Builds from a preorder code, rejecting anything that is not a valid
    /// shuffle tree.
    pub fn from_code(code: Vec<u8>) -> Result<Self, TermError> {
        if !code_is_well_formed(&code) {
            return Err(TermError::Malformed("preorder code is not a binary tree".into()));
        }
        if !code_is_shuffle(&code) {
            return Err(TermError::NotShuffle(render_code(&code, &|g| format!("g{g}"))));
        }
        Ok(ShuffleTree::from_code_unchecked(code))
    }

    /// The single-node monomial `g(1 2)`.
    pub fn corolla(g: GenId) -> Self {
        ShuffleTree::from_code_unchecked(vec![node_byte(g), 1, 2])
    }

    /// Builds `g(left right)` from labelled parts; the labels across both
    /// children must form 1..n and satisfy the shuffle condition.
    pub fn node(g: GenId, left: impl Into<Child>, right: impl Into<Child>) -> Result<Self, TermError> {
        let mut code = vec![node_byte(g)];
        for c in [left.into(), right.into()] {
            match c {
                Child::Leaf(l) => code.push(l),
                Child::Tree(t) => code.extend_from_slice(&t.code),
            }
        }
        ShuffleTree::from_code(code)
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn arity(&self) -> usize {
        self.key[0] as usize
    }

    /// Number of internal nodes.
    pub fn weight(&self) -> usize {
        self.code.len() - self.arity()
    }

    pub fn root_gen(&self) -> Option<GenId> {
        self.code.first().filter(|b| is_node(**b)).map(|b| node_gen(*b))
    }

    /// Generators used, in preorder.
    pub fn generators(&self) -> impl Iterator<Item = GenId> + '_ {
        self.code.iter().filter(|b| is_node(**b)).map(|b| node_gen(*b))
    }

    /// Leaf labels read left to right.
    pub fn planar_labels(&self) -> Vec<u8> {
        self.code.iter().copied().filter(|b| !is_node(*b)).collect()
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        render_code(&self.code, &|g| alphabet.name(g).to_string())
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> TreeDisplay<'a> {
        TreeDisplay { tree: self, alphabet }
    }

    /// Parses the canonical rendering, e.g. `x(z(1 3) 2)`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, TermError> {
        let mut p = TreeParser {
            s: text.as_bytes(),
            pos: 0,
            alphabet,
        };
        p.skip_ws();
        let mut code = Vec::new();
        p.child(&mut code)?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(TermError::Parse {
                pos: p.pos,
                msg: "trailing input".into(),
            });
        }
        ShuffleTree::from_code(code)
    }

    /// Same shape with generators renumbered through `map` (old id -> new id).
    pub fn relabel_generators(&self, map: &[GenId]) -> ShuffleTree {
        let code = self
            .code
            .iter()
            .map(|&b| if is_node(b) { node_byte(map[node_gen(b) as usize]) } else { b })
            .collect();
        ShuffleTree::from_code_unchecked(code)
    }
}

pub struct TreeDisplay<'a> {
    tree: &'a ShuffleTree,
    alphabet: &'a Alphabet,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tree.render(self.alphabet))
    }
}

fn render_code(code: &[u8], name: &dyn Fn(GenId) -> String) -> String {
    fn go(code: &[u8], i: usize, name: &dyn Fn(GenId) -> String, out: &mut String) -> usize {
        let b = code[i];
        if !is_node(b) {
            out.push_str(&b.to_string());
            return i + 1;
        }
        out.push_str(&name(node_gen(b)));
        out.push('(');
        let r = go(code, i + 1, name, out);
        out.push(' ');
        let e = go(code, r, name, out);
        out.push(')');
        e
    }
    let mut out = String::new();
    if !code.is_empty() {
        go(code, 0, name, &mut out);
    }
    out
}

fn code_is_well_formed(code: &[u8]) -> bool {
    // A binary tree in preorder: needed = 1, each node adds one, each leaf uses one.
    let mut needed = 1usize;
    for (i, &b) in code.iter().enumerate() {
        if needed == 0 {
            return false;
        }
        if is_node(b) {
            needed += 1;
        } else if b == 0 {
            return false;
        } else {
            needed -= 1;
        }
        if needed == 0 && i + 1 != code.len() {
            return false;
        }
    }
    needed == 0 && !code.is_empty()
}

struct TreeParser<'a> {
    s: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> TermError {
        TermError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), TermError> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn child(&mut self, code: &mut Vec<u8>) -> Result<(), TermError> {
        self.skip_ws();
        let start = self.pos;
        match self.s.get(self.pos) {
            Some(c) if c.is_ascii_digit() => {
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let label: u8 = text
                    .parse()
                    .ok()
                    .filter(|l| *l >= 1 && *l < NODE_BIT)
                    .ok_or_else(|| self.err(format!("bad leaf label `{text}`")))?;
                code.push(label);
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || matches!(self.s[self.pos], b'_' | b'\''))
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let g = self
                    .alphabet
                    .lookup(name)
                    .ok_or_else(|| self.err(format!("unknown generator `{name}`")))?;
                code.push(node_byte(g));
                self.expect(b'(')?;
                self.child(code)?;
                self.child(code)?;
                self.expect(b')')
            }
            _ => Err(self.err("expected a leaf label or a generator")),
        }
    }
}

/// True iff leaf labels are a permutation of 1..n and at every internal node
/// the minimal leaf of the left child is below that of the right child.
pub fn validate_shuffle(tree: &ShuffleTree) -> bool {
    code_is_well_formed(tree.code()) && code_is_shuffle(tree.code())
}

fn code_is_shuffle(code: &[u8]) -> bool {
    let labels: Vec<u8> = code.iter().copied().filter(|b| !is_node(*b)).collect();
    let n = labels.len();
    let mut seen = vec![false; n + 1];
    for &l in &labels {
        let l = l as usize;
        if l == 0 || l > n || seen[l] {
            return false;
        }
        seen[l] = true;
    }
    let layout = Layout::of(code);
    (0..code.len())
        .filter(|&i| is_node(code[i]))
        .all(|i| layout.min[i + 1] < layout.min[layout.right(i)])
}

/// Compares two monomials of equal arity under the path-lexicographic order.
pub fn compare(a: &ShuffleTree, b: &ShuffleTree) -> Result<Ordering, TermError> {
    if a.arity() != b.arity() {
        return Err(TermError::ArityMismatch {
            left: a.arity(),
            right: b.arity(),
        });
    }
    Ok(a.cmp(b))
}

/// Shuffle composition `outer ∘_slot inner`. `inner_labels` lists the labels
/// (ascending) that the leaves of `inner` receive in the result; its minimum
/// must be `slot`. Outer leaves other than `slot` take the remaining labels
/// in increasing order.
pub fn shuffle_compose(
    outer: &ShuffleTree,
    slot: usize,
    inner: &ShuffleTree,
    inner_labels: &[u8],
) -> Result<ShuffleTree, TermError> {
    let n_out = outer.arity();
    let n_in = inner.arity();
    let total = n_out + n_in - 1;
    if slot == 0 || slot > n_out {
        return Err(TermError::BadSlot { slot, arity: n_out });
    }
    if total > ARITY_CAP {
        return Err(TermError::ArityCap(total));
    }
    let bad = |msg: &str| TermError::BadRedistribution(msg.to_string());
    if inner_labels.len() != n_in {
        return Err(bad("label count differs from the inner arity"));
    }
    if inner_labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("labels must be strictly increasing"));
    }
    if inner_labels[0] as usize != slot {
        return Err(bad("the smallest inner label must equal the slot"));
    }
    if *inner_labels.last().unwrap() as usize > total {
        return Err(bad("label exceeds the result arity"));
    }
    let mut outer_map = vec![0u8; n_out + 1];
    let mut free = (1..=total as u8).filter(|l| !inner_labels.contains(l) || *l as usize == slot);
    for slot_label in outer_map.iter_mut().skip(1) {
        *slot_label = free.next().unwrap();
    }
    debug_assert_eq!(outer_map[slot] as usize, slot);
    let mut code = Vec::with_capacity(outer.code.len() + inner.code.len());
    for &b in outer.code.iter() {
        if is_node(b) {
            code.push(b);
        } else if b as usize == slot {
            code.extend(
                inner
                    .code
                    .iter()
                    .map(|&c| if is_node(c) { c } else { inner_labels[c as usize - 1] }),
            );
        } else {
            code.push(outer_map[b as usize]);
        }
    }
    let t = ShuffleTree::from_code_unchecked(code);
    debug_assert!(validate_shuffle(&t));
    Ok(t)
}

/// Every shuffle tree of arity `n` over the alphabet, sorted descending.
pub fn enumerate_monomials(alphabet: &Alphabet, n: usize) -> Vec<ShuffleTree> {
    if n == 0 || alphabet.is_empty() && n > 1 {
        return Vec::new();
    }
    let labels: Vec<u8> = (1..=n as u8).collect();
    let mut out: Vec<ShuffleTree> = codes_on(&labels, alphabet.len() as u8)
        .into_iter()
        .map(ShuffleTree::from_code_unchecked)
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn codes_on(labels: &[u8], gens: u8) -> Vec<Vec<u8>> {
    if labels.len() == 1 {
        return vec![vec![labels[0]]];
    }
    let rest = &labels[1..];
    let mut out = Vec::new();
    // The left child always holds the minimal label; choose the rest of it.
    for mask in 0u32..(1 << rest.len()) {
        if mask == (1 << rest.len()) - 1 {
            continue;
        }
        let mut left = vec![labels[0]];
        let mut right = Vec::new();
        for (i, &l) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(l);
            } else {
                right.push(l);
            }
        }
        let lc = codes_on(&left, gens);
        let rc = codes_on(&right, gens);
        for g in 0..gens {
            for l in &lc {
                for r in &rc {
                    let mut code = Vec::with_capacity(1 + l.len() + r.len());
                    code.push(node_byte(g));
                    code.extend_from_slice(l);
                    code.extend_from_slice(r);
                    out.push(code);
                }
            }
        }
    }
    out
}
