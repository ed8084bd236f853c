//! Command-line front end for `hardybox`.
//!
//! Every command reads and writes [`document::Document`]s, prints a
//! one-line verdict and a one-line JSON report, and exits with
//! 0 (true verdict / success), 1 (false verdict) or 2 (input error).
//!
//! When a command emits a document on stdout the verdict and report go to
//! stderr, so documents can be piped straight into the next command.

pub mod document;
mod rational;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use hardybox::bellpoly::{
    deterministic_box, enumerate_vertices, is_local, is_tight, vertex_value, Certificate, DeterministicStrategy,
};
use hardybox::boxspace::{box_from_correlations, correlations_of_box, BinaryVector, BoxTable, Parties, DEFAULT_PARTY_LIMIT};
use hardybox::duality::{box_from_functional, functional_from_box, hardy_box, LocalRelabeling, Relabeling};
use hardybox::functional::{
    correlation_coeffs, evaluate, functional_from_correlation_coeffs, hardy_functional, hardy_test,
    is_standard_form, standardize, theta_value, BellFunctional,
};
use hardybox::nsbox::{is_extremal, is_nonsignaling};
use serde_json::{json, Value};

use document::{Document, Object, ParseOptions};

pub use rational::parse_rational;

#[derive(Parser, Debug)]
#[command(
    name = "hardybox",
    version,
    about = "Exact computations for n observers with two settings and two outcomes each"
)]
struct Cli {
    /// Party count for generated objects; must match the inputs when given.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Largest accepted party count.
    #[arg(long, global = true, default_value_t = DEFAULT_PARTY_LIMIT)]
    limit: usize,
    /// Reject non-canonical rationals and signaling boxes.
    #[arg(long, global = true)]
    strict: bool,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Bell-Hardy functional.
    Hardy {
        /// Emit it in standard form.
        #[arg(long)]
        standardize: bool,
    },
    /// The extremal non-signaling box dual to the Bell-Hardy functional.
    HardyBox,
    /// List deterministic strategies, or emit one as a box.
    Vertices {
        /// Score every strategy with this functional.
        functional: Option<String>,
        /// Emit the deterministic box of strategy `A;B`.
        #[arg(long = "box", value_name = "A;B")]
        strategy: Option<String>,
    },
    /// Rewrite a Bell inequality in standard form.
    Standardize {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Map a Bell inequality to its dual box.
    Dualize {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Map a non-signaling box to its dual functional.
    Undualize {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Evaluate a functional on a box.
    Eval { functional: String, input: String },
    /// Convert between probabilities and correlation coordinates.
    Corr {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check the non-signaling conditions.
    CheckNs {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check that a Bell inequality is a facet.
    CheckTight {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check that a non-signaling box is extremal.
    CheckExtremal {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Decide membership in the Bell polytope and emit a certificate.
    Membership {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Run Hardy's test on a box.
    HardyTest {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Apply a local relabeling to a box or functional.
    Relabel {
        #[arg(default_value = "-")]
        input: String,
        /// Constant outcome flips, one bit per observer.
        #[arg(long)]
        alpha: Option<String>,
        /// Outcome flips applied at setting 1, one bit per observer.
        #[arg(long)]
        beta: Option<String>,
        /// Setting swaps, one bit per observer.
        #[arg(long)]
        swap: Option<String>,
        /// New position of each observer, 1-based and comma separated.
        #[arg(long, value_delimiter = ',')]
        perm: Option<Vec<usize>>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {message}")]
    Document { path: String, message: String },
    #[error(transparent)]
    Core(#[from] hardybox::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// What a command produced.
struct Output {
    document: Option<Document>,
    verdict: String,
    report: Value,
    success: bool,
}

impl Output {
    fn done(document: Document, verdict: impl Into<String>, report: Value) -> Self {
        Output {
            document: Some(document),
            verdict: verdict.into(),
            report,
            success: true,
        }
    }

    fn verdict(success: bool, verdict: impl Into<String>, report: Value) -> Self {
        Output {
            document: None,
            verdict: verdict.into(),
            report,
            success,
        }
    }
}

/// Standard streams, injectable for tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

struct Session<'a, 'io> {
    cli: &'a Cli,
    io: &'a mut Io<'io>,
    stdin_used: bool,
}

impl Session<'_, '_> {
    fn options(&self) -> ParseOptions {
        ParseOptions {
            strict: self.cli.strict,
            limit: self.cli.limit,
        }
    }

    fn parties(&self, n: usize) -> Result<Parties, CliError> {
        if let Some(m) = self.cli.n {
            if m != n {
                return Err(CliError::Input(format!("--n {m} does not match an input with n = {n}")));
            }
        }
        Ok(Parties::with_limit(n, self.cli.limit)?)
    }

    fn requested_parties(&self) -> Result<Parties, CliError> {
        let n = self
            .cli
            .n
            .ok_or_else(|| CliError::Input("this command needs --n".into()))?;
        self.parties(n)
    }

    fn read(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            if std::mem::replace(&mut self.stdin_used, true) {
                return Err(CliError::Input("standard input can be read only once".into()));
            }
            let mut text = String::new();
            self.io
                .stdin
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
            Ok(text)
        } else {
            fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })
        }
    }

    fn load(&mut self, path: &str) -> Result<Object, CliError> {
        let text = self.read(path)?;
        let label = if path == "-" { "<stdin>" } else { path };
        let doc_err = |message: String| CliError::Document {
            path: label.into(),
            message,
        };
        let doc = Document::parse(&text, self.options()).map_err(doc_err)?;
        self.parties(doc.n)?;
        doc.into_object(self.options()).map_err(doc_err)
    }

    /// A box document. `valid` requires non-negative normalized entries;
    /// strict mode also requires non-signaling unless `allow_signaling`.
    fn load_box(&mut self, path: &str, valid: bool, allow_signaling: bool) -> Result<BoxTable, CliError> {
        match self.load(path)? {
            Object::Box(p) => {
                if valid {
                    p.validate()?;
                }
                if self.cli.strict && !allow_signaling {
                    if let Some(w) = is_nonsignaling(&p).violations.into_iter().next() {
                        return Err(hardybox::Error::Signaling(w).into());
                    }
                }
                Ok(p)
            }
            _ => Err(CliError::Input(format!("{path}: expected a box document"))),
        }
    }

    /// A functional document, or the separator of a nonlocality certificate.
    fn load_functional(&mut self, path: &str) -> Result<BellFunctional, CliError> {
        match self.load(path)? {
            Object::Functional(b) => Ok(b),
            Object::Certificate(Certificate::Nonlocal { separator, .. }) => Ok(separator),
            _ => Err(CliError::Input(format!("{path}: expected a functional document"))),
        }
    }

    fn bits(&self, text: &Option<String>, parties: Parties) -> Result<BinaryVector, CliError> {
        match text {
            None => Ok(BinaryVector::zeros(parties)),
            Some(t) => {
                let v: BinaryVector = t.parse()?;
                if v.n() != parties.get() {
                    return Err(CliError::Input(format!(
                        "bitstring {t:?} has length {}, expected {}",
                        v.n(),
                        parties.get()
                    )));
                }
                Ok(v)
            }
        }
    }

    fn execute(&mut self) -> Result<Output, CliError> {
        match &self.cli.command {
            Command::Hardy { standardize: std } => {
                let parties = self.requested_parties()?;
                let mut b = hardy_functional(parties);
                if *std {
                    b = standardize(&b)?;
                }
                Ok(Output::done(
                    Document::from_functional(&b),
                    format!("Bell-Hardy functional, n = {parties}"),
                    json!({"command": "hardy", "n": parties.get(), "standardized": std, "theta": theta_value(&b).to_string()}),
                ))
            }
            Command::HardyBox => {
                let parties = self.requested_parties()?;
                Ok(Output::done(
                    Document::from_box(&hardy_box(parties)),
                    format!("Hardy box, n = {parties}"),
                    json!({"command": "hardy-box", "n": parties.get()}),
                ))
            }
            Command::Vertices { functional, strategy } => {
                if let Some(text) = strategy {
                    let d: DeterministicStrategy = text.parse()?;
                    self.parties(d.n())?;
                    return Ok(Output::done(
                        Document::from_box(&deterministic_box(&d)),
                        format!("deterministic box {d}"),
                        json!({"command": "vertices", "n": d.n(), "strategy": d.to_string()}),
                    ));
                }
                let (parties, b) = match functional {
                    Some(path) => {
                        let b = self.load_functional(path)?;
                        (b.parties(), Some(b))
                    }
                    None => (self.requested_parties()?, None),
                };
                let mut listed = Vec::new();
                let mut saturating = 0;
                for d in enumerate_vertices(parties) {
                    let mut item = json!({"strategy": d.to_string()});
                    if let Some(b) = &b {
                        let value = vertex_value(b, &d)?;
                        saturating += usize::from(num_traits::Zero::is_zero(&value));
                        item["value"] = value.to_string().into();
                    }
                    listed.push(item);
                }
                let total = listed.len();
                let verdict = if b.is_some() {
                    format!("{saturating} of {total} deterministic strategies saturate the functional")
                } else {
                    format!("{total} deterministic strategies")
                };
                let mut report = json!({"command": "vertices", "n": parties.get(), "count": total, "vertices": listed});
                if b.is_some() {
                    report["saturating"] = saturating.into();
                }
                Ok(Output::verdict(true, verdict, report))
            }
            Command::Standardize { input } => {
                let b = self.load_functional(input)?;
                let was_standard = is_standard_form(&b);
                let theta = theta_value(&b);
                let s = standardize(&b)?;
                Ok(Output::done(
                    Document::from_functional(&s),
                    format!("standardized (theta = {theta})"),
                    json!({"command": "standardize", "n": b.n(), "theta": theta.to_string(), "was_standard": was_standard}),
                ))
            }
            Command::Dualize { input } => {
                let b = self.load_functional(input)?;
                let dual = box_from_functional(&b)?;
                let verdict = if dual.auto_standardized {
                    "dual box (input was standardized first)"
                } else {
                    "dual box"
                };
                Ok(Output::done(
                    Document::from_box(&dual.table),
                    verdict,
                    json!({"command": "dualize", "n": b.n(), "auto_standardized": dual.auto_standardized}),
                ))
            }
            Command::Undualize { input } => {
                let p = self.load_box(input, true, false)?;
                let b = functional_from_box(&p)?;
                Ok(Output::done(
                    Document::from_functional(&b),
                    "dual functional",
                    json!({"command": "undualize", "n": p.n()}),
                ))
            }
            Command::Eval { functional, input } => {
                let b = self.load_functional(functional)?;
                let p = self.load_box(input, true, false)?;
                let value = evaluate(&b, &p)?;
                Ok(Output::verdict(
                    true,
                    format!("value {value}"),
                    json!({"command": "eval", "n": p.n(), "value": value.to_string(), "theta": theta_value(&b).to_string()}),
                ))
            }
            Command::Corr { input } => match self.load(input)? {
                Object::Box(p) => {
                    if self.cli.strict {
                        if let Some(w) = is_nonsignaling(&p).violations.into_iter().next() {
                            return Err(hardybox::Error::Signaling(w).into());
                        }
                    }
                    Ok(Output::done(
                        Document::from_correlations(&correlations_of_box(&p)),
                        "correlation coordinates of box",
                        json!({"command": "corr", "n": p.n(), "from": "box", "to": "correlations"}),
                    ))
                }
                Object::Functional(b) => Ok(Output::done(
                    Document::from_coefficients(&correlation_coeffs(&b)),
                    "correlation coefficients of functional",
                    json!({"command": "corr", "n": b.n(), "from": "functional", "to": "correlations"}),
                )),
                Object::Correlations(t) => {
                    let p = box_from_correlations(&t)?;
                    let nonnegative = p.is_nonnegative();
                    let verdict = if nonnegative {
                        "box from correlation coordinates"
                    } else {
                        "box from correlation coordinates (has negative entries)"
                    };
                    Ok(Output::done(
                        Document::from_box(&p),
                        verdict,
                        json!({"command": "corr", "n": t.n(), "from": "correlations", "to": "box", "nonnegative": nonnegative}),
                    ))
                }
                Object::Coefficients(c) => Ok(Output::done(
                    Document::from_functional(&functional_from_correlation_coeffs(&c)),
                    "functional from correlation coefficients",
                    json!({"command": "corr", "n": c.n(), "from": "correlations", "to": "functional"}),
                )),
                Object::Certificate(_) => Err(CliError::Input(format!("{input}: corr does not take certificates"))),
            },
            Command::CheckNs { input } => {
                let p = self.load_box(input, false, true)?;
                let report = is_nonsignaling(&p);
                let ok = report.is_nonsignaling();
                let verdict = match report.violations.first() {
                    None => "non-signaling".to_string(),
                    Some(w) => format!("signaling: {w}"),
                };
                Ok(Output::verdict(
                    ok,
                    verdict,
                    json!({
                        "command": "check-ns",
                        "n": p.n(),
                        "nonsignaling": ok,
                        "violations": report.violations.len(),
                        "signaling_observers": report.signaling_observers(),
                    }),
                ))
            }
            Command::CheckTight { input } => {
                let b = self.load_functional(input)?;
                match is_tight(&b) {
                    Ok(r) => Ok(Output::verdict(
                        r.tight,
                        format!(
                            "{}: rank {} of required {}",
                            if r.tight { "tight" } else { "not tight" },
                            r.rank,
                            r.required
                        ),
                        json!({
                            "command": "check-tight",
                            "n": b.n(),
                            "tight": r.tight,
                            "rank": r.rank,
                            "required": r.required,
                            "saturating": r.saturating.len(),
                            "theta": theta_value(&b).to_string(),
                        }),
                    )),
                    Err(e @ hardybox::Error::NotAnInequality { .. }) => Ok(Output::verdict(
                        false,
                        e.to_string(),
                        json!({"command": "check-tight", "n": b.n(), "tight": false, "valid": false}),
                    )),
                    Err(e) => Err(e.into()),
                }
            }
            Command::CheckExtremal { input } => {
                let p = self.load_box(input, true, true)?;
                let r = is_extremal(&p)?;
                Ok(Output::verdict(
                    r.extremal,
                    format!(
                        "{}: zero rank {} of {}, defect {}",
                        if r.extremal { "extremal" } else { "not extremal" },
                        r.zero_rank,
                        r.chart_dimension,
                        r.defect
                    ),
                    json!({
                        "command": "check-extremal",
                        "n": p.n(),
                        "extremal": r.extremal,
                        "zero_count": r.zero_count,
                        "zero_rank": r.zero_rank,
                        "chart_dimension": r.chart_dimension,
                        "defect": r.defect,
                    }),
                ))
            }
            Command::Membership { input } => {
                let p = self.load_box(input, true, false)?;
                let cert = is_local(&p)?;
                let verdict = cert.verdict().to_string();
                let mut report = json!({"command": "membership", "n": p.n(), "verdict": verdict});
                match &cert {
                    Certificate::Local { weights } => report["support"] = weights.len().into(),
                    Certificate::Nonlocal { value, .. } => report["value"] = value.to_string().into(),
                }
                Ok(Output {
                    document: Some(Document::from_certificate(p.n(), &cert)),
                    verdict,
                    report,
                    success: cert.verdict() == hardybox::bellpoly::Locality::Local,
                })
            }
            Command::HardyTest { input } => {
                let p = self.load_box(input, true, false)?;
                let r = hardy_test(&p);
                let failed: Vec<String> = r.failed.iter().map(ToString::to_string).collect();
                let verdict = if r.passed() {
                    "passes Hardy's test".to_string()
                } else {
                    format!("fails Hardy's test: {}", failed.join(", "))
                };
                Ok(Output::verdict(
                    r.passed(),
                    verdict,
                    json!({"command": "hardy-test", "n": p.n(), "passed": r.passed(), "failed": failed}),
                ))
            }
            Command::Relabel {
                input,
                alpha,
                beta,
                swap,
                perm,
            } => {
                let object = self.load(input)?;
                let parties = match &object {
                    Object::Box(p) => p.parties(),
                    Object::Functional(b) => b.parties(),
                    _ => return Err(CliError::Input(format!("{input}: relabel takes a box or a functional"))),
                };
                let (alpha, beta, swap) = (
                    self.bits(alpha, parties)?,
                    self.bits(beta, parties)?,
                    self.bits(swap, parties)?,
                );
                let n = parties.get();
                let target = match perm {
                    None => (0..n).collect(),
                    Some(p) if p.len() == n && p.iter().all(|&k| (1..=n).contains(&k)) => {
                        p.iter().map(|k| k - 1).collect()
                    }
                    Some(p) => {
                        return Err(CliError::Input(format!("--perm {p:?} is not a permutation of 1..={n}")))
                    }
                };
                let local = (1..=n)
                    .map(|k| LocalRelabeling {
                        swap_setting: swap.component(k).unwrap_or(0) == 1,
                        flip: alpha.component(k).unwrap_or(0) == 1,
                        flip_on_setting: beta.component(k).unwrap_or(0) == 1,
                    })
                    .collect();
                let r = Relabeling::new(target, local)?;
                let report = json!({"command": "relabel", "n": n});
                Ok(match object {
                    Object::Box(p) => Output::done(Document::from_box(&r.apply_to_box(&p)?), "relabeled box", report),
                    Object::Functional(b) => Output::done(
                        Document::from_functional(&r.apply_to_functional(&b)?),
                        "relabeled functional",
                        report,
                    ),
                    _ => unreachable!("checked above"),
                })
            }
        }
    }
}

/// Runs one command line and returns the exit status.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = io.stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = io.stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let mut session = Session {
        cli: &cli,
        io,
        stdin_used: false,
    };
    let output = match session.execute() {
        Ok(output) => output,
        Err(e) => {
            let _ = writeln!(session.io.stderr, "error: {e}");
            return 2;
        }
    };
    let report = format!("{}\n{}\n", output.verdict, output.report);
    let io = session.io;
    let written = match (&output.document, &cli.out) {
        (Some(doc), Some(path)) if path.as_os_str() != "-" => fs::write(path, doc.to_text())
            .map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })
            .and_then(|()| io.stdout.write_all(report.as_bytes()).map_err(stdout_error)),
        (Some(doc), _) => io
            .stdout
            .write_all(doc.to_text().as_bytes())
            .and_then(|()| io.stderr.write_all(report.as_bytes()))
            .map_err(stdout_error),
        (None, _) => io.stdout.write_all(report.as_bytes()).map_err(stdout_error),
    };
    if let Err(e) = written {
        let _ = writeln!(io.stderr, "error: {e}");
        return 2;
    }
    if output.success {
        0
    } else {
        1
    }
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}
