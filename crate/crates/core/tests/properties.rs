mod common;

use std::cmp::Ordering;
use std::sync::OnceLock;

use common::{basis, setup};
use operad_gb::engine::{normal_form_with, Strategy as Pick};
use operad_gb::linalg::same_span;
use operad_gb::poisder::{tau_expand, GdExpr};
use operad_gb::poly::{q, Polynomial};
use operad_gb::presentation::parse;
use operad_gb::symmetrize::permutations;
use operad_gb::{
    compare, complete, enumerate_monomials, normal_form, shuffle_compose, CompletionOptions, Encoding, GroebnerBasis,
    ShuffleTree,
};
use proptest::prelude::*;

fn com_gd() -> &'static (Encoding, GroebnerBasis) {
    static B: OnceLock<(Encoding, GroebnerBasis)> = OnceLock::new();
    B.get_or_init(|| {
        let (_, e, b) = basis("com-gd", 4, 2);
        (e, b)
    })
}

fn gd() -> &'static (Encoding, GroebnerBasis) {
    static B: OnceLock<(Encoding, GroebnerBasis)> = OnceLock::new();
    B.get_or_init(|| {
        let (_, e, b) = basis("gd", 4, 2);
        (e, b)
    })
}

fn monomials(enc: &Encoding, n: usize) -> &'static [ShuffleTree] {
    type Cache = std::sync::Mutex<std::collections::HashMap<(String, usize), &'static [ShuffleTree]>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (
        enc.alphabet().generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>().join(","),
        n,
    );
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(key)
        .or_insert_with(|| Box::leak(enumerate_monomials(enc.alphabet(), n).into_boxed_slice()))
}

fn random_poly(enc: &Encoding, n: usize, picks: &[(usize, i64)]) -> Polynomial {
    let ms = monomials(enc, n);
    Polynomial::from_terms(n, picks.iter().map(|(i, c)| (q(*c), ms[i % ms.len()].clone()))).unwrap()
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((any::<usize>(), -5i64..=5), 1..8)
}

fn double_factorial(k: usize) -> usize {
    (1..=k).rev().step_by(2).product()
}

#[test]
fn tree_counts() {
    let (_, one) = setup("com");
    let (_, three) = setup("gd");
    for n in 2..=7 {
        assert_eq!(enumerate_monomials(one.alphabet(), n).len(), double_factorial(2 * n - 3), "n={n}");
    }
    for n in 2..=5 {
        let want = double_factorial(2 * n - 3) * 3usize.pow(n as u32 - 1);
        assert_eq!(enumerate_monomials(three.alphabet(), n).len(), want, "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_total_and_strict(n in 2usize..=5, i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let ms = monomials(&gd().0, n);
        let (a, b, c) = (&ms[i % ms.len()], &ms[j % ms.len()], &ms[k % ms.len()]);
        let ab = compare(a, b).unwrap();
        prop_assert_eq!(ab, compare(b, a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab == Ordering::Less && compare(b, c).unwrap() == Ordering::Less {
            prop_assert_eq!(compare(a, c).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn order_respects_composition(
        n in 2usize..=4, m in 2usize..=3, i in any::<usize>(), j in any::<usize>(),
        k in any::<usize>(), slot in any::<usize>(), mask in any::<u32>(),
    ) {
        let enc = &gd().0;
        let ms = monomials(enc, n);
        let outs = monomials(enc, m);
        let (a, b, c) = (&ms[i % ms.len()], &ms[j % ms.len()], &outs[k % outs.len()]);
        prop_assume!(a != b);
        let slot = 1 + slot % m;
        // labels for the inner tree: the slot plus n-1 larger ones
        let total = n + m - 1;
        let mut pool: Vec<u8> = ((slot as u8 + 1)..=(total as u8)).collect();
        let mut labels = vec![slot as u8];
        let mut bits = mask;
        while labels.len() < n {
            let idx = (bits as usize) % pool.len();
            labels.push(pool.remove(idx));
            bits = bits.rotate_right(7) ^ 0x9e37_79b9;
        }
        labels.sort_unstable();
        let ca = shuffle_compose(c, slot, a, &labels).unwrap();
        let cb = shuffle_compose(c, slot, b, &labels).unwrap();
        prop_assert_eq!(compare(&ca, &cb).unwrap(), compare(a, b).unwrap());
        let inner = &outs[k % outs.len()];
        let inner_labels: Vec<u8> = (1..=m as u8).collect();
        let ai = shuffle_compose(a, 1, inner, &inner_labels).unwrap();
        let bi = shuffle_compose(b, 1, inner, &inner_labels).unwrap();
        prop_assert_eq!(compare(&ai, &bi).unwrap(), compare(a, b).unwrap());
    }

    #[test]
    fn add_then_sub_is_identity(n in 2usize..=4, p in picks(), r in picks()) {
        let enc = &com_gd().0;
        let (p, r) = (random_poly(enc, n, &p), random_poly(enc, n, &r));
        prop_assert_eq!(p.add(&r).unwrap().sub(&r).unwrap(), p.clone());
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn normal_forms_are_strategy_independent(n in 2usize..=4, p in picks(), seed in any::<u64>()) {
        for (enc, b) in [com_gd(), gd()] {
            let p = random_poly(enc, n, &p);
            let lead = normal_form(&p, b).unwrap();
            let rand = normal_form_with(&p, b, Pick::Random(seed)).unwrap();
            prop_assert_eq!(&lead.normal_form, &rand.normal_form);
            prop_assert_eq!(rand.replay(b).unwrap(), rand.normal_form.clone());
            prop_assert!(lead.normal_form.terms().iter().all(|t| b.is_normal(&t.monomial)));
        }
    }

    #[test]
    fn orbit_span_is_permutation_stable(name in prop::sample::select(vec!["gd1", "spec1", "tp-identity", "manifold"]), k in any::<usize>()) {
        let (_, enc) = setup("com-gd");
        let (_, gd_enc) = setup("gd");
        let id = operad_gb::library_identity(name).unwrap();
        let perms = permutations(id.arity());
        let sigma = &perms[k % perms.len()];
        for e in [&enc, &gd_enc] {
            let a = e.multilinear_orbit(&id).unwrap();
            let b = e.multilinear_orbit(&id.permute(sigma)).unwrap();
            prop_assert!(same_span(id.arity(), &a, &b));
        }
    }

    #[test]
    fn certificates_replay(name in prop::sample::select(vec!["spec1", "spec2", "gd1", "leftsym", "comm", "assoc"])) {
        let (enc, b) = gd();
        let v = operad_gb::verify_identity(b, enc, &operad_gb::library_identity(name).unwrap()).unwrap();
        prop_assert!(v.replay(b).is_ok());
    }

    #[test]
    fn derivation_is_a_derivation_of_both_products(a in gd_expr(3, 1), b in gd_expr(3, 4)) {
        let (ta, tb) = (tau_expand(&a).unwrap(), tau_expand(&b).unwrap());
        let lhs = ta.bracket(&tb).derive();
        let rhs = ta.derive().bracket(&tb).add(&ta.bracket(&tb.derive()));
        prop_assert_eq!(lhs, rhs);
        let lhs = ta.mul(&tb).derive();
        let rhs = ta.derive().mul(&tb).add(&ta.mul(&tb.derive()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_satisfies_jacobi_and_leibniz(a in gd_expr(2, 1), b in gd_expr(2, 3), c in gd_expr(2, 5)) {
        let (x, y, z) = (tau_expand(&a).unwrap(), tau_expand(&b).unwrap(), tau_expand(&c).unwrap());
        let jac = x.bracket(&y).bracket(&z).add(&y.bracket(&z).bracket(&x)).add(&z.bracket(&x).bracket(&y));
        prop_assert!(jac.is_zero());
        let leib = x.bracket(&y.mul(&z)).sub(&x.bracket(&y).mul(&z)).sub(&y.mul(&x.bracket(&z)));
        prop_assert!(leib.is_zero());
        prop_assert!(x.bracket(&y).add(&y.bracket(&x)).is_zero());
    }

    #[test]
    fn derivation_grading(e in gd_expr(5, 1)) {
        let t = tau_expand(&e).unwrap();
        let k = e.circ_count();
        prop_assert!(t.derivation_orders().all(|o| o == k));
    }

    #[test]
    fn presentations_round_trip(name in prop::sample::select(vec!["novikov", "gd", "com-gd", "tp", "lie", "com", "as"])) {
        let p = operad_gb::builtin(name).unwrap();
        let text = p.render();
        prop_assert_eq!(parse(&text).unwrap(), p);
    }
}

/// Random multilinear expression on `size` consecutive variables from `first`.
fn gd_expr(size: u8, first: u8) -> impl Strategy<Value = GdExpr> {
    let leaves: Vec<u8> = (first..first + size).collect();
    Just(leaves).prop_shuffle().prop_flat_map(build)
}

fn build(vars: Vec<u8>) -> BoxedStrategy<GdExpr> {
    if vars.len() == 1 {
        return Just(GdExpr::Var(vars[0])).boxed();
    }
    let n = vars.len();
    (1..n, any::<bool>())
        .prop_flat_map(move |(cut, circ)| {
            let (l, r) = (vars[..cut].to_vec(), vars[cut..].to_vec());
            (build(l), build(r)).prop_map(move |(l, r)| {
                if circ {
                    GdExpr::Circ(Box::new(l), Box::new(r))
                } else {
                    GdExpr::Bracket(Box::new(l), Box::new(r))
                }
            })
        })
        .boxed()
}

#[test]
fn confluence_500_per_arity() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (enc, b) in [com_gd(), gd()] {
        for n in 2..=4 {
            for _ in 0..500 {
                let len = rng.gen_range(1..8);
                let picks: Vec<(usize, i64)> = (0..len).map(|_| (rng.gen(), rng.gen_range(-5..=5))).collect();
                let p = random_poly(enc, n, &picks);
                let a = normal_form(&p, b).unwrap().normal_form;
                let c = normal_form_with(&p, b, Pick::Random(rng.gen())).unwrap().normal_form;
                assert_eq!(a, c);
            }
        }
    }
}

#[test]
fn dims_stable_when_raising_arity() {
    for name in ["com-gd", "gd", "novikov", "lie"] {
        let lo = basis(name, 4, 1).2.dims_table();
        let hi = basis(name, 5, 2).2.dims_table();
        assert_eq!(lo[..], hi[..4], "{name}");
    }
}

#[test]
fn dims_do_not_depend_on_precedence() {
    for name in ["com-gd", "tp", "gd", "novikov"] {
        let (p, enc) = setup(name);
        let mut names: Vec<String> = enc.alphabet().generators().iter().map(|g| g.name.clone()).collect();
        names.reverse();
        let rev = p.encoding(Some(&names)).unwrap();
        let a = complete(enc.alphabet(), &p.relations(&enc).unwrap(), CompletionOptions { max_arity: 5, workers: 2 }).unwrap();
        let b = complete(rev.alphabet(), &p.relations(&rev).unwrap(), CompletionOptions { max_arity: 5, workers: 2 }).unwrap();
        assert_eq!(a.dims_table(), b.dims_table(), "{name}");
    }
}

#[test]
fn worker_count_does_not_change_the_basis() {
    let (p, enc) = setup("com-gd");
    let rels = p.relations(&enc).unwrap();
    let runs: Vec<String> = [1, 2, 8]
        .into_iter()
        .map(|w| {
            let b = complete(enc.alphabet(), &rels, CompletionOptions { max_arity: 5, workers: w }).unwrap();
            serde_json::to_string(&b.to_artifact()).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}
