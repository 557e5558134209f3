use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::divisor::{find_divisor_embeddings, rewrite_with, Occurrence};
use super::GroebnerBasis;
use crate::error::EngineError;
use crate::poly::{Polynomial, Q};
use crate::tree::{Layout, ShuffleTree};

/// Which reducible monomial and occurrence to rewrite next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// The largest reducible monomial, at its first occurrence.
    LeadingFirst,
    /// A uniformly random reducible monomial and occurrence.
    Random(u64),
}

/// A single-occurrence rewrite `coeff * monomial -> coeff * tail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: usize,
    pub monomial: ShuffleTree,
    pub coeff: Q,
    pub occurrence: Occurrence,
    pub result: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub input: Polynomial,
    pub steps: Vec<RewriteStep>,
    pub normal_form: Polynomial,
}

pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Result<Reduction, EngineError> {
    normal_form_with(p, basis, Strategy::LeadingFirst)
}

pub fn normal_form_with(p: &Polynomial, basis: &GroebnerBasis, strategy: Strategy) -> Result<Reduction, EngineError> {
    basis.check_arity(p.arity())?;
    let set = basis.rule_set();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::LeadingFirst => None,
    };
    let mut current = p.clone();
    let mut steps = Vec::new();
    loop {
        let pick = match rng.as_mut() {
            None => current.terms().iter().find_map(|t| {
                set.first_occurrence(&t.monomial, &Layout::of(t.monomial.code()))
                    .map(|(r, o)| (t.clone(), r, o))
            }),
            Some(rng) => {
                let mut reducible: Vec<_> = current
                    .terms()
                    .iter()
                    .filter_map(|t| {
                        let occ = set.occurrences(&t.monomial, &Layout::of(t.monomial.code()));
                        (!occ.is_empty()).then(|| (t.clone(), occ))
                    })
                    .collect();
                reducible.shuffle(rng);
                reducible.pop().map(|(t, mut occ)| {
                    occ.shuffle(rng);
                    let (r, o) = occ.pop().unwrap();
                    (t, r, o)
                })
            }
        };
        let Some((term, rule, occ)) = pick else { break };
        let result = apply_step(&current, &term.monomial, &term.coeff, &basis.rules()[rule].tail, &occ);
        current = result.clone();
        steps.push(RewriteStep {
            rule,
            monomial: term.monomial,
            coeff: term.coeff,
            occurrence: occ,
            result,
        });
    }
    Ok(Reduction {
        input: p.clone(),
        steps,
        normal_form: current,
    })
}

fn apply_step(p: &Polynomial, m: &ShuffleTree, c: &Q, tail: &Polynomial, occ: &Occurrence) -> Polynomial {
    let removed = p.combine(&Polynomial::monomial(m.clone()), &-c.clone());
    removed.combine(&rewrite_with(m, occ, tail), c)
}

impl Reduction {
    /// Re-applies every recorded step from the input and checks each
    /// intermediate polynomial; returns the final normal form.
    pub fn replay(&self, basis: &GroebnerBasis) -> Result<Polynomial, EngineError> {
        let mut current = self.input.clone();
        for (k, step) in self.steps.iter().enumerate() {
            let bad = |msg: &str| EngineError::BadCertificate(format!("step {k}: {msg}"));
            let rule = basis.rules().get(step.rule).ok_or_else(|| bad("unknown rule"))?;
            if current.coeff_of(&step.monomial) != step.coeff || step.coeff.is_zero() {
                return Err(bad("coefficient does not match the current polynomial"));
            }
            if !find_divisor_embeddings(&rule.lead, &step.monomial).contains(&step.occurrence) {
                return Err(bad("occurrence is not an embedding of the rule lead"));
            }
            current = apply_step(&current, &step.monomial, &step.coeff, &rule.tail, &step.occurrence);
            if current != step.result {
                return Err(bad("recorded result differs"));
            }
        }
        if current != self.normal_form {
            return Err(EngineError::BadCertificate("final normal form differs".into()));
        }
        if current.terms().iter().any(|t| !basis.is_normal(&t.monomial)) {
            return Err(EngineError::BadCertificate("final polynomial is still reducible".into()));
        }
        Ok(current)
    }
}
