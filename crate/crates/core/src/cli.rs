//! Command-line front end: `classify`, `orbits`, `spectral` and `verify`.
//!
//! Exit codes are 0 when every check passes, 1 when a check fails and 2 for
//! unusable input. Output is collected and written once.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::groups::{SemidirectGroup, DEFAULT_SIZE_LIMIT};
use crate::io::{parse_group, parse_vectors, MatrixJson, PvmFile, RepFile};
use crate::linalg::MATRIX_TOL;
use crate::mackey::{classify, ReportSummary};
use crate::repr::MatrixRep;
use crate::spectral::{spectral_measure, support_of_vector};
use crate::suites::{run_suites, Fault, Suite, SuiteConfig, SuiteResult};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mackey",
    version,
    about = "Irreducible representations of finite semidirect products"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Matrix tolerance for the verification suites.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Largest accepted group order.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_LIMIT)]
    pub limit: usize,
    /// Inject a deliberate violation into the verification suites.
    #[arg(long, global = true, value_enum)]
    pub fault: Option<Fault>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List one irreducible representation per orbit and stabilizer irrep.
    Classify { file: PathBuf },
    /// List the orbits of the dual action with stabilizer orders.
    Orbits { file: PathBuf },
    /// Spectral measure of the restriction of a representation to A.
    Spectral {
        file: PathBuf,
        /// Representation of A (one matrix per element of A) or of G.
        #[arg(long)]
        rep: PathBuf,
        /// JSON list of vectors whose supports are reported.
        #[arg(long)]
        vectors: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
        suite: SuiteChoice,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteChoice {
    All,
    Thm1,
    Patching,
    Lemma1,
    Lemma2,
    Lemma3,
    Transport,
    Hom,
}

impl SuiteChoice {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            SuiteChoice::All => Suite::ALL.to_vec(),
            SuiteChoice::Thm1 => vec![Suite::Thm1],
            SuiteChoice::Patching => vec![Suite::Patching],
            SuiteChoice::Lemma1 => vec![Suite::Lemma1],
            SuiteChoice::Lemma2 => vec![Suite::Lemma2],
            SuiteChoice::Lemma3 => vec![Suite::Lemma3],
            SuiteChoice::Transport => vec![Suite::Transport],
            SuiteChoice::Hom => vec![Suite::Hom],
        }
    }
}

/// Settings shared by every command once the arguments are validated.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub seed: u64,
    pub tol: f64,
    pub format: Format,
    pub limit: usize,
    pub fault: Option<Fault>,
}

/// Exit code and the text destined for standard output and standard error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }

    fn check_failed(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_CHECK_FAILED,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    run_cli(cli)
}

pub fn run_cli(cli: Cli) -> Outcome {
    let tol = cli.tol.unwrap_or(MATRIX_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Outcome::input_error(format!("--tol must be positive, got {tol}"));
    }
    let input = match &cli.command {
        Command::Classify { file }
        | Command::Orbits { file }
        | Command::Spectral { file, .. }
        | Command::Verify { file, .. } => file.clone(),
    };
    let config = RunConfig {
        input,
        seed: cli.seed,
        tol,
        format: cli.format,
        limit: cli.limit,
        fault: cli.fault,
    };
    match cli.command {
        Command::Classify { .. } => run_classify(&config),
        Command::Orbits { .. } => run_orbits(&config),
        Command::Spectral { rep, vectors, .. } => run_spectral(&config, &rep, vectors.as_deref()),
        Command::Verify { suite, .. } => run_verify(&config, &suite.suites()),
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))
}

fn load_group(config: &RunConfig) -> Result<SemidirectGroup, Outcome> {
    let text = read(&config.input)?;
    parse_group(&text, config.limit).map_err(|e| Outcome::input_error(format!("{}: {e}", config.input.display())))
}

/// Left-aligned columns separated by two spaces, without trailing blanks.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    for row in std::iter::once(&header_cells).chain(rows) {
        let mut line = String::new();
        for (k, (cell, w)) in row.iter().zip(&widths).enumerate() {
            if k > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{cell:<w$}");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn set_string(items: &[usize]) -> String {
    let inner: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn run_classify(config: &RunConfig) -> Outcome {
    let g = match load_group(config) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let report = match classify(&g, config.seed) {
        Ok(r) => r,
        Err(e) => return Outcome::check_failed(e),
    };
    let summary = report.summary();
    let stdout = match config.format {
        Format::Json => to_json(&summary),
        Format::Table => classify_table(&summary),
    };
    Outcome {
        code: if summary.passed { EXIT_PASS } else { EXIT_CHECK_FAILED },
        stdout,
        stderr: String::new(),
    }
}

pub fn classify_table(summary: &ReportSummary) -> String {
    let headers = [
        "orbit",
        "rep",
        "orbit size",
        "stab order",
        "stab irrep",
        "stab dim",
        "dim",
        "irreducible",
        "oracle",
    ];
    let rows: Vec<Vec<String>> = summary
        .entries
        .iter()
        .map(|e| {
            vec![
                e.orbit.to_string(),
                e.representative.to_string(),
                e.orbit_size.to_string(),
                e.stabilizer_order.to_string(),
                e.stabilizer_irrep.to_string(),
                e.stabilizer_dim.to_string(),
                e.dim.to_string(),
                if e.irreducible { "yes" } else { "no" }.to_string(),
                e.oracle_match.map_or("-".to_string(), |m| m.to_string()),
            ]
        })
        .collect();
    let mut out = render_table(&headers, &rows);
    let _ = writeln!(
        out,
        "sum of squares {} = |G| {}",
        summary.sum_dim_sq, summary.group_order
    );
    let _ = writeln!(
        out,
        "hom matrix identity: {}; oracle bijection: {}; completeness: {}",
        yes_no(summary.hom_identity),
        yes_no(summary.oracle_bijection),
        pass_fail(summary.passed)
    );
    out
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub orbit: usize,
    pub representative: usize,
    pub members: Vec<usize>,
    pub stabilizer_order: usize,
}

pub fn orbit_summaries(g: &SemidirectGroup) -> Vec<OrbitSummary> {
    g.dual()
        .orbits()
        .into_iter()
        .enumerate()
        .map(|(i, o)| OrbitSummary {
            orbit: i,
            representative: o.representative,
            stabilizer_order: g.dual().stabilizer(g.h(), o.representative).order(),
            members: o.members,
        })
        .collect()
}

pub fn run_orbits(config: &RunConfig) -> Outcome {
    let g = match load_group(config) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let orbits = orbit_summaries(&g);
    let stdout = match config.format {
        Format::Json => to_json(&orbits),
        Format::Table => orbits
            .iter()
            .map(|o| {
                format!(
                    "orbit {}: {} stab order {}\n",
                    o.orbit,
                    set_string(&o.members),
                    o.stabilizer_order
                )
            })
            .collect(),
    };
    Outcome {
        code: EXIT_PASS,
        stdout,
        stderr: String::new(),
    }
}

/// Measure file with optional vector supports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralOutput {
    pub orders: Vec<u64>,
    pub dim: usize,
    pub atoms: BTreeMap<usize, MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supports: Option<Vec<Vec<usize>>>,
}

impl SpectralOutput {
    pub fn pvm_file(&self) -> PvmFile {
        PvmFile {
            orders: self.orders.clone(),
            dim: self.dim,
            atoms: self.atoms.clone(),
        }
    }
}

/// The restriction to `A` of a representation given on `A` or on `G`.
fn rep_of_a(g: &SemidirectGroup, rep: MatrixRep) -> Result<MatrixRep, Error> {
    let na = g.a().order();
    if rep.group_order() == na {
        rep.validate(&g.a().to_finite_group())?;
        Ok(rep)
    } else if rep.group_order() == g.order() {
        rep.validate(g.group())?;
        MatrixRep::new(rep.dim(), (0..na).map(|a| rep.mat(g.embed_a(a)).clone()).collect())
    } else {
        Err(Error::Parse(format!(
            "mats: expected {na} (elements of A) or {} (elements of G) matrices, found {}",
            g.order(),
            rep.group_order()
        )))
    }
}

pub fn run_spectral(config: &RunConfig, rep_path: &Path, vectors: Option<&Path>) -> Outcome {
    let g = match load_group(config) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let rep_text = match read(rep_path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let pi1 = match RepFile::from_json(&rep_text)
        .and_then(|f| f.to_rep())
        .and_then(|r| rep_of_a(&g, r))
    {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(format!("{}: {e}", rep_path.display())),
    };
    let vectors = match vectors {
        None => None,
        Some(path) => match read(path).and_then(|t| {
            parse_vectors(&t, pi1.dim()).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))
        }) {
            Ok(v) => Some(v),
            Err(o) => return o,
        },
    };
    let p = match spectral_measure(g.a(), &pi1) {
        Ok(p) => p,
        Err(e) => return Outcome::check_failed(e),
    };
    let supports: Option<Vec<Vec<usize>>> = vectors.as_ref().map(|vs| {
        vs.iter()
            .map(|v| support_of_vector(&p, v).into_iter().collect())
            .collect()
    });
    let stdout = match config.format {
        Format::Json => {
            let file = PvmFile::from_pvm(&p);
            to_json(&SpectralOutput {
                orders: file.orders,
                dim: file.dim,
                atoms: file.atoms,
                supports,
            })
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = p
                .atoms()
                .keys()
                .map(|&chi| {
                    vec![
                        chi.to_string(),
                        format!("{:?}", g.a().character(chi).exponents()),
                        p.rank(chi).to_string(),
                    ]
                })
                .collect();
            let mut out = render_table(&["atom", "exponents", "rank"], &rows);
            for (k, s) in supports.iter().flatten().enumerate() {
                let _ = writeln!(out, "vector {k}: support {}", set_string(s));
            }
            out
        }
    };
    Outcome {
        code: EXIT_PASS,
        stdout,
        stderr: String::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group_order: usize,
    pub seed: u64,
    pub tol: f64,
    pub fault: Option<String>,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

const SHOWN_FAILURES: usize = 5;

pub fn run_verify(config: &RunConfig, suites: &[Suite]) -> Outcome {
    let g = match load_group(config) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let cfg = SuiteConfig {
        seed: config.seed,
        tol: config.tol,
        fault: config.fault,
    };
    let results = match run_suites(&g, suites, &cfg) {
        Ok(r) => r,
        Err(e) => return Outcome::check_failed(e),
    };
    let report = VerifyReport {
        group_order: g.order(),
        seed: config.seed,
        tol: config.tol,
        fault: config
            .fault
            .map(|f| f.to_possible_value().expect("named variant").get_name().to_string()),
        passed: results.iter().all(|r| r.passed),
        suites: results,
    };
    let stdout = match config.format {
        Format::Json => to_json(&report),
        Format::Table => verify_table(&report),
    };
    Outcome {
        code: if report.passed { EXIT_PASS } else { EXIT_CHECK_FAILED },
        stdout,
        stderr: String::new(),
    }
}

pub fn verify_table(report: &VerifyReport) -> String {
    let rows: Vec<Vec<String>> = report
        .suites
        .iter()
        .map(|r| {
            vec![
                r.suite.to_string(),
                pass_fail(r.passed).to_string(),
                r.cases.to_string(),
                format!("{:.2e}", r.max_deviation),
            ]
        })
        .collect();
    let mut out = render_table(&["suite", "result", "cases", "max deviation"], &rows);
    for r in &report.suites {
        for f in r.failures.iter().take(SHOWN_FAILURES) {
            let _ = writeln!(out, "  {}: {f}", r.suite);
        }
        if r.failures.len() > SHOWN_FAILURES {
            let _ = writeln!(
                out,
                "  {}: {} more failures",
                r.suite,
                r.failures.len() - SHOWN_FAILURES
            );
        }
    }
    let failed = report.suites.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        out.push_str("all suites pass\n");
    } else {
        let _ = writeln!(out, "{failed} of {} suites failed", report.suites.len());
    }
    out
}
