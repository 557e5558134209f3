//! Dimension oracle that never touches shuffle trees: it works with
//! multilinear expressions of the symmetric operad, generates the
//! consequences of the identities in arity `n` directly and takes a rank.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use operad_gb::poly::Q;
use operad_gb::{Expr, Presentation, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum M {
    Leaf(u8),
    Node(u8, Box<M>, Box<M>),
}

impl M {
    fn least(&self) -> u8 {
        match self {
            M::Leaf(i) => *i,
            M::Node(_, l, r) => l.least().min(r.least()),
        }
    }
}

type Lin = BTreeMap<M, Q>;

fn add_to(acc: &mut Lin, m: M, c: Q) {
    match acc.entry(m) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub struct DimsOracle {
    syms: Vec<Symmetry>,
    identities: Vec<(usize, Lin)>,
    monomials: HashMap<Vec<u8>, Vec<M>>,
    ideals: BTreeMap<usize, Vec<Lin>>,
}

impl DimsOracle {
    pub fn new(p: &Presentation) -> Self {
        let syms: Vec<Symmetry> = p.ops.iter().map(|o| o.symmetry).collect();
        let names: Vec<&str> = p.ops.iter().map(|o| o.name.as_str()).collect();
        let mut o = DimsOracle {
            syms,
            identities: Vec::new(),
            monomials: HashMap::new(),
            ideals: BTreeMap::new(),
        };
        for id in &p.identities {
            let mut lin = Lin::new();
            for (c, e) in id.terms() {
                let (s, m) = o.canon(&from_expr(e, &names));
                add_to(&mut lin, m, if s < 0 { -c.clone() } else { c.clone() });
            }
            o.identities.push((id.arity(), lin));
        }
        o
    }

    /// Orders the children of symmetric nodes by their minimal leaf.
    fn canon(&self, m: &M) -> (i32, M) {
        match m {
            M::Leaf(_) => (1, m.clone()),
            M::Node(o, l, r) => {
                let (sl, l) = self.canon(l);
                let (sr, r) = self.canon(r);
                let mut s = sl * sr;
                let sym = self.syms[*o as usize];
                if sym != Symmetry::Plain && l.least() > r.least() {
                    if sym == Symmetry::Antisymmetric {
                        s = -s;
                    }
                    return (s, M::Node(*o, Box::new(r), Box::new(l)));
                }
                (s, M::Node(*o, Box::new(l), Box::new(r)))
            }
        }
    }

    /// Canonical monomials on the variable set `vars` (sorted).
    fn monomials_on(&mut self, vars: &[u8]) -> Vec<M> {
        if let Some(v) = self.monomials.get(vars) {
            return v.clone();
        }
        let mut out = Vec::new();
        if vars.len() == 1 {
            out.push(M::Leaf(vars[0]));
        } else {
            let n = vars.len();
            for mask in 1..(1u32 << n) - 1 {
                let a: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| vars[i]).collect();
                let b: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| vars[i]).collect();
                let (ma, mb) = (self.monomials_on(&a), self.monomials_on(&b));
                for (o, sym) in self.syms.clone().into_iter().enumerate() {
                    if sym != Symmetry::Plain && a[0] > b[0] {
                        continue;
                    }
                    for x in &ma {
                        for y in &mb {
                            out.push(M::Node(o as u8, Box::new(x.clone()), Box::new(y.clone())));
                        }
                    }
                }
            }
        }
        self.monomials.insert(vars.to_vec(), out.clone());
        out
    }

    pub fn free_dim(&mut self, n: usize) -> usize {
        let vars: Vec<u8> = (1..=n as u8).collect();
        self.monomials_on(&vars).len()
    }

    fn relabel(&self, lin: &Lin, map: &[u8]) -> Lin {
        let mut out = Lin::new();
        for (m, c) in lin {
            let (s, m) = self.canon(&relabel(m, map));
            add_to(&mut out, m, if s < 0 { -c.clone() } else { c.clone() });
        }
        out
    }

    fn substitute(&self, lin: &Lin, subs: &[M]) -> Lin {
        let mut out = Lin::new();
        for (m, c) in lin {
            let (s, m) = self.canon(&subst(m, subs));
            add_to(&mut out, m, if s < 0 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// A basis of the consequences of the identities in arity `n`.
    fn ideal(&mut self, n: usize) -> Vec<Lin> {
        if let Some(v) = self.ideals.get(&n) {
            return v.clone();
        }
        let mut ech = Echelon::default();
        let all: Vec<u8> = (1..=n as u8).collect();
        // an identity at the root, monomials substituted for its variables
        for (k, lin) in self.identities.clone() {
            if k > n {
                continue;
            }
            for blocks in ordered_partitions(&all, k) {
                let choices: Vec<Vec<M>> = blocks.iter().map(|b| self.monomials_on(b)).collect();
                for pick in product(&choices) {
                    ech.insert(self.substitute(&lin, &pick));
                }
            }
        }
        // a generator at the root, a consequence in one child
        for k in 2..n {
            let lower = self.ideal(k);
            if lower.is_empty() {
                continue;
            }
            for mask in 1..(1u32 << n) - 1 {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let a: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
                let b: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| all[i]).collect();
                let vs = self.monomials_on(&b);
                for g in &lower {
                    let g = self.relabel(g, &a);
                    for v in &vs {
                        for (o, sym) in self.syms.clone().into_iter().enumerate() {
                            let mut left = Lin::new();
                            let mut right = Lin::new();
                            for (m, c) in &g {
                                let l = M::Node(o as u8, Box::new(m.clone()), Box::new(v.clone()));
                                let r = M::Node(o as u8, Box::new(v.clone()), Box::new(m.clone()));
                                let (s, l) = self.canon(&l);
                                add_to(&mut left, l, if s < 0 { -c.clone() } else { c.clone() });
                                let (s, r) = self.canon(&r);
                                add_to(&mut right, r, if s < 0 { -c.clone() } else { c.clone() });
                            }
                            ech.insert(left);
                            if sym == Symmetry::Plain {
                                ech.insert(right);
                            }
                        }
                    }
                }
            }
        }
        let rows: Vec<Lin> = ech.rows.into_values().collect();
        self.ideals.insert(n, rows.clone());
        rows
    }

    pub fn dim(&mut self, n: usize) -> usize {
        let free = self.free_dim(n);
        free - self.ideal(n).len()
    }
}

fn from_expr(e: &Expr, names: &[&str]) -> M {
    match e {
        Expr::Var(i) => M::Leaf(*i),
        Expr::App(o, l, r) => M::Node(
            names.iter().position(|n| n == o).unwrap() as u8,
            Box::new(from_expr(l, names)),
            Box::new(from_expr(r, names)),
        ),
    }
}

fn relabel(m: &M, map: &[u8]) -> M {
    match m {
        M::Leaf(i) => M::Leaf(map[*i as usize - 1]),
        M::Node(o, l, r) => M::Node(*o, Box::new(relabel(l, map)), Box::new(relabel(r, map))),
    }
}

fn subst(m: &M, subs: &[M]) -> M {
    match m {
        M::Leaf(i) => subs[*i as usize - 1].clone(),
        M::Node(o, l, r) => M::Node(*o, Box::new(subst(l, subs)), Box::new(subst(r, subs))),
    }
}

/// Ordered partitions of `set` into `k` nonempty blocks.
fn ordered_partitions(set: &[u8], k: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    let mut assign = vec![0usize; set.len()];
    fn rec(i: usize, set: &[u8], k: usize, assign: &mut Vec<usize>, out: &mut Vec<Vec<Vec<u8>>>) {
        if i == set.len() {
            let mut blocks = vec![Vec::new(); k];
            for (j, b) in assign.iter().enumerate() {
                blocks[*b].push(set[j]);
            }
            if blocks.iter().all(|b| !b.is_empty()) {
                out.push(blocks);
            }
            return;
        }
        for b in 0..k {
            assign[i] = b;
            rec(i + 1, set, k, assign, out);
        }
    }
    rec(0, set, k, &mut assign, &mut out);
    out
}

fn product(choices: &[Vec<M>]) -> Vec<Vec<M>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for m in c {
                let mut p = prefix.clone();
                p.push(m.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[derive(Default)]
struct Echelon {
    rows: BTreeMap<M, Lin>,
}

impl Echelon {
    fn insert(&mut self, mut row: Lin) {
        loop {
            let Some((lead, c)) = row.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
                return;
            };
            match self.rows.get(&lead) {
                Some(p) => {
                    for (m, v) in p {
                        add_to(&mut row, m.clone(), -(v * &c));
                    }
                }
                None => {
                    let inv = Q::one() / c;
                    let monic = row.into_iter().map(|(m, v)| (m, v * &inv)).collect();
                    self.rows.insert(lead, monic);
                    return;
                }
            }
        }
    }
}

/// Multilinear Lyndon words on `1..n`, counted by brute force.
pub fn lyndon_count(n: usize) -> usize {
    operad_gb::symmetrize::permutations(n)
        .into_iter()
        .filter(|w| (1..w.len()).all(|i| w[..] < [&w[i..], &w[..i]].concat()[..]))
        .count()
}

/// Multilinear associative words on `1..n`.
pub fn word_count(n: usize) -> usize {
    operad_gb::symmetrize::permutations(n).len()
}
