//! `unispan` command-line tool.
//!
//! Exit codes: 0 success, 1 a residual or certificate check failed, 2 the
//! input could not be read or parsed, 3 the subalgebra is outside the
//! supported envelope.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use unispan::algebra::{validate_spec, BlockSpec, TypeISubalgebraSpec};
use unispan::io::{from_json, to_canonical_json};
use unispan::selftest::{run_selftest, SelftestConfig};
use unispan::{
    conditional_expectation, random_instance, run_decompose, run_spancert, verify_decomposition,
    Decomposer, DecompositionRecord, Error, InstanceFile, Mutation, Tolerances,
};

#[derive(Parser, Debug)]
#[command(name = "unispan", version, about = "Unitary decompositions of complements of type I subalgebras of M_n(C)")]
struct Cli {
    /// Residual tolerance (reconstruction and per-term checks).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative eigenvalue threshold for Gram ranks.
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path; `-` is stdout.
    #[arg(long, global = true, default_value = "-")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose the matrix of an instance file (`-` reads stdin).
    Decompose { input: PathBuf },
    /// Re-verify a stored decomposition record.
    Verify { input: PathBuf },
    /// Span certificate for a subalgebra shape.
    Spancert(#[command(flatten)] Shape),
    /// Print the conditional expectation of an instance matrix.
    Expect { input: PathBuf },
    /// Random complement element for a subalgebra shape.
    RandomInstance(#[command(flatten)] Shape),
    /// Run every invariant suite over the built-in subalgebra grid.
    Selftest {
        /// Skip specs and sizes of dimension above this.
        #[arg(long)]
        max_n: Option<usize>,
        /// Flip one dilation sign, to show the suites can fail.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Class {
    C1,
    C2,
    C3,
    C4,
    Generic,
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long, value_enum)]
    class: Class,
    /// Dimension of the diagonal masa (`c1`).
    #[arg(long)]
    n: Option<usize>,
    /// Factor size (`c2`).
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Atom multiplicity (`c2`).
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated atom ranks (`c3`).
    #[arg(long, value_delimiter = ',')]
    atoms: Vec<usize>,
    /// Blocks `k:m1,m2;k:m` (`c4`, `generic`).
    #[arg(long)]
    blocks: Option<String>,
}

impl Shape {
    fn spec(&self) -> anyhow::Result<TypeISubalgebraSpec> {
        let spec = match self.class {
            Class::C1 => TypeISubalgebraSpec::masa(self.n.context("--class c1 needs --n")?),
            Class::C2 => TypeISubalgebraSpec::factor(self.k, self.m.context("--class c2 needs --m")?),
            Class::C3 => {
                if self.atoms.is_empty() {
                    bail!("--class c3 needs --atoms");
                }
                TypeISubalgebraSpec::atomic(&self.atoms)
            }
            Class::C4 | Class::Generic => {
                let text = self.blocks.as_deref().context("--blocks is required")?;
                TypeISubalgebraSpec::new(parse_blocks(text)?)?
            }
        };
        spec.check_structure()?;
        Ok(spec)
    }
}

fn parse_blocks(text: &str) -> anyhow::Result<Vec<BlockSpec>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|block| {
            let (k, mults) = block
                .split_once(':')
                .ok_or_else(|| anyhow!("block '{block}' is not of the form k:m1,m2"))?;
            let k = k.trim().parse().with_context(|| format!("bad k in '{block}'"))?;
            let mults = mults
                .split(',')
                .map(|m| m.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("bad multiplicity in '{block}'"))?;
            Ok(BlockSpec::new(k, mults))
        })
        .collect()
}

enum Failure {
    Residual(String),
    Parse(anyhow::Error),
    Unsupported(unispan::UnsupportedReason),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Unsupported(reason)) => Failure::Unsupported(*reason),
            _ => Failure::Parse(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_instance(path: &Path) -> anyhow::Result<InstanceFile> {
    let text = read_input(path)?;
    let inst: InstanceFile = from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    inst.validate()?;
    Ok(inst)
}

/// Writes to stdout, or atomically (temp file in the target directory, then
/// rename) to a path.
fn write_output(out: &Path, text: &str) -> anyhow::Result<()> {
    if out == Path::new("-") {
        let mut stdout = io::stdout().lock();
        writeln!(stdout, "{text}")?;
        return Ok(());
    }
    let dir = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    writeln!(tmp, "{text}")?;
    tmp.persist(out)
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn tolerances(cli: &Cli) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol {
        tol.recon_tol = t;
        tol.term_tol = t;
    }
    if let Some(r) = cli.rank_tol {
        tol.rank_tol = r;
    }
    tol
}

fn emit<T: serde::Serialize>(cli: &Cli, value: &T) -> Result<(), Failure> {
    let text = to_canonical_json(value).map_err(anyhow::Error::from)?;
    write_output(&cli.out, &text)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tol = tolerances(cli);
    let decomposer = Decomposer::new(tol);
    match &cli.command {
        Command::Decompose { input } => {
            let inst = read_instance(input)?;
            let record = run_decompose(&inst, &decomposer)?;
            if record.projection_residual > tol.input_tol {
                eprintln!(
                    "warning: input was not in the complement; decomposing its projection (removed part has norm {:.3e})",
                    record.projection_residual
                );
            }
            emit(cli, &record)?;
            if !record.pass {
                return Err(Failure::Residual(format!(
                    "residuals out of tolerance: recon {:.3e}, unitarity {:.3e}, membership {:.3e}",
                    record.report.recon_residual,
                    record.report.max_unitarity_residual,
                    record.report.max_membership_residual
                )));
            }
        }
        Command::Verify { input } => {
            let text = read_input(input)?;
            let record: DecompositionRecord =
                from_json(&text).with_context(|| format!("parsing {}", input.display()))?;
            let d = &record.decomposition;
            let spec = d.spec.as_ref().context("decomposition record carries no spec")?;
            let report = verify_decomposition(spec, &d.target, d)?;
            let stored = &record.report;
            let agrees = (report.recon_residual - stored.recon_residual).abs() <= 1e-12
                && (report.max_unitarity_residual - stored.max_unitarity_residual).abs() <= 1e-12
                && (report.max_membership_residual - stored.max_membership_residual).abs() <= 1e-12
                && report.term_count == stored.term_count;
            let pass = agrees && report.passes(&tol);
            emit(cli, &json!({ "report": report, "matches_stored": agrees, "pass": pass }))?;
            if !pass {
                return Err(Failure::Residual("verification failed".into()));
            }
        }
        Command::Spancert(shape) => {
            let spec = shape.spec()?;
            let cert = run_spancert(&spec, &decomposer)?;
            emit(cli, &cert)?;
            if !cert.pass {
                return Err(Failure::Residual(format!(
                    "rank {} of expected {}",
                    cert.gram_rank, cert.expected_rank
                )));
            }
        }
        Command::Expect { input } => {
            let inst = read_instance(input)?;
            let e = conditional_expectation(&inst.spec, &inst.matrix)?;
            emit(cli, &e)?;
        }
        Command::RandomInstance(shape) => {
            let spec = shape.spec()?;
            validate_spec(&spec, spec.dim())?.require_supported()?;
            emit(cli, &random_instance(&spec, cli.seed)?)?;
        }
        Command::Selftest { max_n, inject_fault } => {
            let cfg = SelftestConfig {
                seed: cli.seed,
                max_n: *max_n,
                mutation: inject_fault.then_some(Mutation::FlipDilationSign),
                tol,
            };
            let summary = run_selftest(&cfg);
            for suite in &summary.suites {
                eprintln!("{suite}");
            }
            emit(cli, &summary)?;
            if !summary.pass {
                let failed = summary.suites.iter().filter(|s| !s.pass).count();
                return Err(Failure::Residual(format!("{failed} suite(s) failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Residual(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(reason)) => {
            let report = json!({
                "error": "unsupported configuration",
                "reason": reason.rule(),
                "details": reason,
            });
            eprintln!("{report}");
            ExitCode::from(3)
        }
    }
}
