use serde::{Deserialize, Serialize};

use super::divisor::Occurrence;
use super::reduce::{normal_form, Reduction};
use super::GroebnerBasis;
use crate::error::{EngineError, SymmetrizeError};
use crate::poly::format_q;
use crate::symmetrize::{Encoding, IdentityExpr};
use crate::tree::Alphabet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictResult {
    Holds,
    Fails,
}

/// Outcome of reducing every orbit relation of an identity.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub identity: String,
    pub result: VerdictResult,
    pub certificate: Vec<Reduction>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.result == VerdictResult::Holds
    }

    /// Nonzero normal forms, if any.
    pub fn witnesses(&self) -> impl Iterator<Item = &Reduction> {
        self.certificate.iter().filter(|r| !r.normal_form.is_zero())
    }

    /// Replays every reduction and checks the recorded verdict.
    pub fn replay(&self, basis: &GroebnerBasis) -> Result<(), EngineError> {
        let mut all_zero = true;
        for r in &self.certificate {
            all_zero &= r.replay(basis)?.is_zero();
        }
        let expected = if all_zero { VerdictResult::Holds } else { VerdictResult::Fails };
        if expected != self.result {
            return Err(EngineError::BadCertificate("verdict disagrees with the normal forms".into()));
        }
        Ok(())
    }

    pub fn report(&self, alphabet: &Alphabet) -> CertificateReport {
        CertificateReport {
            identity: self.identity.clone(),
            result: self.result,
            orbit: self
                .certificate
                .iter()
                .map(|r| ReductionReport {
                    input: r.input.render(alphabet),
                    steps: r
                        .steps
                        .iter()
                        .map(|s| StepReport {
                            rule: s.rule,
                            monomial: s.monomial.render(alphabet),
                            coefficient: format_q(&s.coeff),
                            occurrence: s.occurrence.clone(),
                            result: s.result.render(alphabet),
                        })
                        .collect(),
                    normal_form: r.normal_form.render(alphabet),
                })
                .collect(),
        }
    }
}

/// JSON form of a verdict and its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub identity: String,
    pub result: VerdictResult,
    pub orbit: Vec<ReductionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub input: String,
    pub steps: Vec<StepReport>,
    pub normal_form: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub rule: usize,
    pub monomial: String,
    pub coefficient: String,
    pub occurrence: Occurrence,
    pub result: String,
}

/// Reduces each relation of the identity's orbit modulo `basis`; the
/// identity holds iff all of them reduce to zero.
pub fn verify_identity(basis: &GroebnerBasis, encoding: &Encoding, identity: &IdentityExpr) -> Result<Verdict, EngineError> {
    if encoding.alphabet() != basis.alphabet() {
        return Err(SymmetrizeError::Unencoded(format!(
            "identity `{}`: encoding and basis use different generators",
            identity.name
        ))
        .into());
    }
    basis.check_arity(identity.arity())?;
    let orbit = encoding.multilinear_orbit(identity)?;
    let certificate = orbit
        .iter()
        .map(|p| normal_form(p, basis))
        .collect::<Result<Vec<_>, _>>()?;
    let result = if certificate.iter().all(|r| r.normal_form.is_zero()) {
        VerdictResult::Holds
    } else {
        VerdictResult::Fails
    };
    Ok(Verdict {
        identity: identity.name.clone(),
        result,
        certificate,
    })
}
