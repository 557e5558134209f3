//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::engine::{complete, BasisArtifact, CertificateReport, CompletionOptions, GroebnerBasis};
use crate::error::EngineError;
use crate::poisder::{tau_identity, TauReport};
use crate::presentation::{self, parse_with_ops, Presentation};
use crate::symmetrize::{Encoding, IdentityExpr};
use crate::tree::ARITY_CAP;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USER: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "operad-gb", version, about = "Gröbner bases for binary operads")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complete a presentation and print the truncated basis.
    Complete(RunArgs),
    /// Print dim P(n) for n = 1..max arity.
    Dims(RunArgs),
    /// Check identities against the basis; exit 1 if one fails.
    Verify(VerifyArgs),
    /// Test whether an identity vanishes in Poisson algebras with a derivation.
    TauCheck(TauArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Built-in presentation: novikov, gd, com-gd, tp, lie, com, as.
    #[arg(long, conflicts_with = "presentation_file")]
    pub operad: Option<String>,
    /// Presentation in the .opd format.
    #[arg(long)]
    pub presentation_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Generator names, lowest first, e.g. `mul,bra`.
    #[arg(long, value_delimiter = ',')]
    pub precedence: Option<Vec<String>>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reuse bases stored in this directory.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 5)]
    pub max_arity: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Identity from the presentation or the built-in library.
    #[arg(long, required_unless_present = "identity_file")]
    pub identity: Option<String>,
    /// File of `id` declarations over the presentation's operations.
    #[arg(long, conflicts_with = "identity")]
    pub identity_file: Option<PathBuf>,
    /// Defaults to the largest identity arity.
    #[arg(long)]
    pub max_arity: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TauArgs {
    /// Library identity name.
    #[arg(required_unless_present = "identity_file")]
    pub identity: Option<String>,
    #[arg(long, conflicts_with = "identity")]
    pub identity_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn user(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USER,
        message: message.into(),
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::ArityCap { .. } => EXIT_CAP,
            _ => EXIT_USER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CompleteReport {
    pub presentation: String,
    pub basis: BasisArtifact,
}

#[derive(Debug, Serialize)]
pub struct DimsReport {
    pub presentation: String,
    pub max_arity: usize,
    /// `dims[n - 1] = dim P(n)`.
    pub dims: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub presentation: String,
    pub certified_arity: usize,
    pub holds: bool,
    pub verdicts: Vec<CertificateReport>,
}

#[derive(Debug, Serialize)]
pub struct TauCheckReport {
    pub zero: bool,
    pub identities: Vec<TauReport>,
}

/// Runs a parsed command, writing the report to `stdout` or `--out`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Complete(a) => cmd_complete(a, stdout),
        Command::Dims(a) => cmd_dims(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::TauCheck(a) => cmd_tau_check(a, stdout),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| user(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| user(e.to_string())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| user(format!("{}: {e}", path.display())))
}

fn load(source: &Source) -> Result<(String, Presentation), Failure> {
    match (&source.operad, &source.presentation_file) {
        (Some(name), _) => presentation::builtin(name)
            .map(|p| (name.clone(), p))
            .map_err(|e| user(e.to_string())),
        (None, Some(path)) => {
            let p = presentation::parse(&read(path)?).map_err(|e| user(format!("{}:{e}", path.display())))?;
            Ok((path.display().to_string(), p))
        }
        (None, None) => Err(user("one of --operad or --presentation-file is required")),
    }
}

fn check_cap(max_arity: usize) -> Result<(), Failure> {
    if max_arity > ARITY_CAP {
        return Err(EngineError::ArityCap {
            requested: max_arity,
            cap: ARITY_CAP,
        }
        .into());
    }
    Ok(())
}

/// Cache key: the rendered presentation, generator order and arity.
fn cache_key(p: &Presentation, enc: &Encoding, max_arity: usize) -> String {
    let mut h = Sha256::new();
    h.update(p.render().as_bytes());
    for g in enc.alphabet().generators() {
        h.update(g.name.as_bytes());
        h.update([0]);
    }
    h.update(max_arity.to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn basis_for(p: &Presentation, enc: &Encoding, max_arity: usize, common: &Common) -> Result<GroebnerBasis, Failure> {
    check_cap(max_arity)?;
    let cached = common
        .cache_dir
        .as_ref()
        .map(|d| d.join(format!("{}.json", cache_key(p, enc, max_arity))));
    if let Some(path) = cached.as_ref().filter(|p| p.exists()) {
        let artifact: BasisArtifact =
            serde_json::from_str(&read(path)?).map_err(|e| user(format!("{}: {e}", path.display())))?;
        info!("loaded basis from {}", path.display());
        return Ok(GroebnerBasis::from_artifact(&artifact)?);
    }
    let relations = p.relations(enc).map_err(|e| user(e.to_string()))?;
    let basis = complete(
        enc.alphabet(),
        &relations,
        CompletionOptions {
            max_arity,
            workers: common.workers as usize,
        },
    )?;
    if let Some(path) = cached {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| user(format!("{}: {e}", dir.display())))?;
        }
        fs::write(&path, to_json(&basis.to_artifact())).map_err(|e| user(format!("{}: {e}", path.display())))?;
    }
    Ok(basis)
}

fn encoding(p: &Presentation, common: &Common) -> Result<Encoding, Failure> {
    p.encoding(common.precedence.as_deref()).map_err(|e| user(e.to_string()))
}

fn cmd_complete(a: &RunArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (name, p) = load(&a.source)?;
    let enc = encoding(&p, &a.common)?;
    let basis = basis_for(&p, &enc, a.max_arity, &a.common)?;
    let artifact = basis.to_artifact();
    let text = match a.common.format {
        Format::Json => to_json(&CompleteReport {
            presentation: name,
            basis: artifact,
        }),
        Format::Human => {
            let mut s = artifact.to_text();
            let counts: Vec<String> = artifact.rules_per_arity.iter().skip(2).map(ToString::to_string).collect();
            s.push_str(&format!(
                "# {} rules; per arity 2..{}: {}\n",
                artifact.rules.len(),
                artifact.certified_arity,
                counts.join(" ")
            ));
            s
        }
    };
    emit(&text, a.common.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_dims(a: &RunArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (name, p) = load(&a.source)?;
    let enc = encoding(&p, &a.common)?;
    let basis = basis_for(&p, &enc, a.max_arity, &a.common)?;
    let dims = basis.dims_table();
    let text = match a.common.format {
        Format::Json => to_json(&DimsReport {
            presentation: name,
            max_arity: a.max_arity,
            dims,
        }),
        Format::Human => dims
            .iter()
            .enumerate()
            .map(|(i, d)| format!("{}\t{d}\n", i + 1))
            .collect(),
    };
    emit(&text, a.common.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

/// Looks an identity up in the presentation first, then in the library.
fn named_identity(p: &Presentation, name: &str) -> Result<IdentityExpr, Failure> {
    if let Some(id) = p.identity(name) {
        return Ok(id.clone());
    }
    presentation::library_identity(name).map_err(|e| user(e.to_string()))
}

fn identity_file(path: &Path, p: &Presentation) -> Result<Vec<IdentityExpr>, Failure> {
    let parsed = parse_with_ops(&read(path)?, &p.ops).map_err(|e| user(format!("{}:{e}", path.display())))?;
    if parsed.identities.is_empty() {
        return Err(user(format!("{}: no identities", path.display())));
    }
    Ok(parsed.identities)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let (name, p) = load(&a.source)?;
    let identities = match (&a.identity, &a.identity_file) {
        (Some(n), _) => vec![named_identity(&p, n)?],
        (None, Some(path)) => identity_file(path, &p)?,
        (None, None) => return Err(user("one of --identity or --identity-file is required")),
    };
    let enc = encoding(&p, &a.common)?;
    let needed = identities.iter().map(IdentityExpr::arity).max().unwrap_or(2);
    let max_arity = a.max_arity.unwrap_or(needed);
    let basis = basis_for(&p, &enc, max_arity, &a.common)?;
    let mut verdicts = Vec::new();
    for id in &identities {
        let v = crate::engine::verify_identity(&basis, &enc, id)?;
        v.replay(&basis)?;
        verdicts.push(v);
    }
    let holds = verdicts.iter().all(|v| v.holds());
    let text = match a.common.format {
        Format::Json => to_json(&VerifyReport {
            presentation: name,
            certified_arity: basis.certified_arity(),
            holds,
            verdicts: verdicts.iter().map(|v| v.report(enc.alphabet())).collect(),
        }),
        Format::Human => {
            let mut s = String::new();
            for v in &verdicts {
                let steps: usize = v.certificate.iter().map(|r| r.steps.len()).sum();
                s.push_str(&format!(
                    "{}: {} ({} orbit relations, {} rewrite steps)\n",
                    v.identity,
                    if v.holds() { "holds" } else { "fails" },
                    v.certificate.len(),
                    steps
                ));
                for w in v.witnesses() {
                    s.push_str(&format!(
                        "  {}\n    -> {}\n",
                        w.input.render(enc.alphabet()),
                        w.normal_form.render(enc.alphabet())
                    ));
                }
            }
            s
        }
    };
    emit(&text, a.common.out.as_deref(), stdout)?;
    Ok(if holds { EXIT_OK } else { EXIT_FAILS })
}

fn cmd_tau_check(a: &TauArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let lib = presentation::library();
    let identities = match (&a.identity, &a.identity_file) {
        (Some(n), _) => vec![presentation::library_identity(n).map_err(|e| user(e.to_string()))?],
        (None, Some(path)) => identity_file(path, &lib)?,
        (None, None) => return Err(user("an identity name or --identity-file is required")),
    };
    let mut reports = Vec::new();
    for id in &identities {
        let (_, r) = tau_identity(id, &lib.ops).map_err(|e| user(e.to_string()))?;
        reports.push(r);
    }
    let zero = reports.iter().all(|r| r.zero);
    let text = match a.format {
        Format::Json => to_json(&TauCheckReport {
            zero,
            identities: reports,
        }),
        Format::Human => reports
            .iter()
            .map(|r| {
                let mut s = format!(
                    "{}: {} (derivation orders {:?}; {} monomials before collection, {} after)\n",
                    r.identity,
                    if r.zero { "zero" } else { "nonzero" },
                    r.grading,
                    r.monomials_before,
                    r.monomials_after
                );
                if !r.zero {
                    s.push_str(&format!("  {}\n", r.image));
                }
                s
            })
            .collect(),
    };
    emit(&text, a.out.as_deref(), stdout)?;
    Ok(if zero { EXIT_OK } else { EXIT_FAILS })
}
