//! Rewriting modulo a truncated Gröbner basis of a shuffle operad.

pub mod complete;
pub mod divisor;
pub mod reduce;
pub mod verify;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::poly::{Polynomial, Term};
use crate::tree::{enumerate_monomials, is_node, node_gen, Alphabet, Layout, ShuffleTree};

pub use complete::{common_multiples, complete, CompletionOptions, Overlap};
pub use divisor::{find_divisor_embeddings, Occurrence};
pub use reduce::{normal_form, normal_form_with, Reduction, RewriteStep, Strategy};
pub use verify::{verify_identity, CertificateReport, ReductionReport, StepReport, Verdict, VerdictResult};

/// `lead -> tail`, with every tail monomial below `lead`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: ShuffleTree,
    pub tail: Polynomial,
}

impl RewriteRule {
    /// Orients a nonzero relation by its leading monomial.
    pub fn from_relation(p: &Polynomial) -> Option<RewriteRule> {
        let p = p.monic();
        let lead = p.leading()?.monomial.clone();
        let tail = Polynomial::from_sorted_unchecked(
            p.arity(),
            p.terms()[1..]
                .iter()
                .map(|t| Term {
                    coeff: -t.coeff.clone(),
                    monomial: t.monomial.clone(),
                })
                .collect(),
        );
        Some(RewriteRule { lead, tail })
    }

    pub fn arity(&self) -> usize {
        self.lead.arity()
    }

    /// `lead - tail`.
    pub fn relation(&self) -> Polynomial {
        Polynomial::monomial(self.lead.clone())
            .sub(&self.tail)
            .expect("rule sides share arity")
    }
}

/// Rules plus a lookup table by root generator.
#[derive(Debug, Clone, Default)]
pub(crate) struct RuleSet {
    rules: Vec<RewriteRule>,
    by_root: Vec<Vec<usize>>,
}

impl RuleSet {
    pub fn push(&mut self, rule: RewriteRule) {
        let g = rule.lead.root_gen().expect("rule leads have a root") as usize;
        if self.by_root.len() <= g {
            self.by_root.resize(g + 1, Vec::new());
        }
        self.by_root[g].push(self.rules.len());
        self.rules.push(rule);
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Every (rule, occurrence) in `m`, ordered by root position then rule.
    pub fn occurrences(&self, m: &ShuffleTree, layout: &Layout) -> Vec<(usize, Occurrence)> {
        let mut out = Vec::new();
        self.scan(m, layout, |r, o| {
            out.push((r, o));
            false
        });
        out
    }

    pub fn first_occurrence(&self, m: &ShuffleTree, layout: &Layout) -> Option<(usize, Occurrence)> {
        let mut found = None;
        self.scan(m, layout, |r, o| {
            found = Some((r, o));
            true
        });
        found
    }

    fn scan(&self, m: &ShuffleTree, layout: &Layout, mut visit: impl FnMut(usize, Occurrence) -> bool) {
        let code = m.code();
        for (i, &b) in code.iter().enumerate() {
            if !is_node(b) {
                continue;
            }
            let Some(candidates) = self.by_root.get(node_gen(b) as usize) else {
                continue;
            };
            let room = layout.end[i] - i;
            for &r in candidates {
                let lead = &self.rules[r].lead;
                if lead.code().len() > room {
                    continue;
                }
                if let Some(o) = divisor::match_at(lead, m, layout, i) {
                    if visit(r, o) {
                        return;
                    }
                }
            }
        }
    }

    pub fn is_normal(&self, m: &ShuffleTree) -> bool {
        self.first_occurrence(m, &Layout::of(m.code())).is_none()
    }
}

/// Rules certified up to `certified_arity`: every critical pair whose
/// common multiple has arity at most that bound reduces to zero.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    alphabet: Alphabet,
    set: RuleSet,
    certified_arity: usize,
}

impl GroebnerBasis {
    pub(crate) fn from_parts(alphabet: Alphabet, set: RuleSet, certified_arity: usize) -> Self {
        GroebnerBasis {
            alphabet,
            set,
            certified_arity,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewriteRule] {
        self.set.rules()
    }

    pub fn certified_arity(&self) -> usize {
        self.certified_arity
    }

    pub(crate) fn rule_set(&self) -> &RuleSet {
        &self.set
    }

    /// Rule counts indexed by arity (entry 0 and 1 are always zero).
    pub fn rules_per_arity(&self) -> Vec<usize> {
        let mut counts = vec![0; self.certified_arity + 1];
        for r in self.rules() {
            counts[r.arity()] += 1;
        }
        counts
    }

    pub fn is_normal(&self, m: &ShuffleTree) -> bool {
        self.set.is_normal(m)
    }

    pub fn occurrences(&self, m: &ShuffleTree) -> Vec<(usize, Occurrence)> {
        self.set.occurrences(m, &Layout::of(m.code()))
    }

    pub(crate) fn check_arity(&self, n: usize) -> Result<(), EngineError> {
        if n > self.certified_arity {
            return Err(EngineError::BeyondCertified {
                arity: n,
                certified: self.certified_arity,
            });
        }
        Ok(())
    }

    /// Monomials of arity `n` divisible by no rule lead.
    pub fn normal_monomials(&self, n: usize) -> Result<Vec<ShuffleTree>, EngineError> {
        self.check_arity(n)?;
        Ok(enumerate_monomials(&self.alphabet, n)
            .into_par_iter()
            .filter(|m| self.set.is_normal(m))
            .collect())
    }

    /// Dimension of the arity-`n` component of the quotient operad.
    pub fn dims(&self, n: usize) -> Result<usize, EngineError> {
        self.check_arity(n)?;
        Ok(enumerate_monomials(&self.alphabet, n)
            .into_par_iter()
            .filter(|m| self.set.is_normal(m))
            .count())
    }

    /// Dimensions for arities 1..=certified arity.
    pub fn dims_table(&self) -> Vec<usize> {
        (1..=self.certified_arity)
            .map(|n| self.dims(n).expect("within certified arity"))
            .collect()
    }

    pub fn to_artifact(&self) -> BasisArtifact {
        BasisArtifact {
            generators: self.alphabet.generators().iter().map(|g| g.name.clone()).collect(),
            certified_arity: self.certified_arity,
            rules_per_arity: self.rules_per_arity(),
            rules: self
                .rules()
                .iter()
                .enumerate()
                .map(|(id, r)| RuleArtifact {
                    id,
                    arity: r.arity(),
                    lead: r.lead.render(&self.alphabet),
                    tail: r.tail.render(&self.alphabet),
                })
                .collect(),
        }
    }

    pub fn from_artifact(a: &BasisArtifact) -> Result<GroebnerBasis, EngineError> {
        let alphabet = Alphabet::from_names(&a.generators)?;
        let mut set = RuleSet::default();
        for r in &a.rules {
            let lead = ShuffleTree::parse(&r.lead, &alphabet)?;
            let tail = Polynomial::parse(&r.tail, &alphabet, Some(lead.arity()))?;
            set.push(RewriteRule { lead, tail });
        }
        Ok(GroebnerBasis::from_parts(alphabet, set, a.certified_arity))
    }
}

/// Serializable form of a basis; monomials in their canonical rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisArtifact {
    pub generators: Vec<String>,
    pub certified_arity: usize,
    pub rules_per_arity: Vec<usize>,
    pub rules: Vec<RuleArtifact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleArtifact {
    pub id: usize,
    pub arity: usize,
    pub lead: String,
    pub tail: String,
}

impl BasisArtifact {
    /// One rule per line, `lead -> tail`.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# generators: {}\n# certified arity: {}\n",
            self.generators.join(" < "),
            self.certified_arity
        );
        for r in &self.rules {
            s.push_str(&format!("{} -> {}\n", r.lead, r.tail));
        }
        s
    }
}
