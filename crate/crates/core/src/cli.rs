//! Command dispatch for the `sympres` binary.
//!
//! Exit codes: 0 when the necessary condition holds (or a check passes),
//! 1 on bad input, 2 when closure exceeds the order bound, 3 when the group is
//! obstructed or the semismall check fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::catalog::{self, CatalogError};
use crate::group::{GroupError, DEFAULT_MAX_ORDER};
use crate::io::{parse_fibers, parse_form_input, AnalysisReport, GroupSpec, SpecError};
use crate::reflection::{
    census, reflection_subgroup, verdict_from, z_locus_min_codim, VerdictKind,
};
use crate::spectrum::{pfaffian, symplectic_eigenvalues, SpectrumError, Tolerances};
use crate::strata::{build_lattice, semismall_check, SemismallReport, StrataError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ORDER_BOUND: i32 = 2;
pub const EXIT_OBSTRUCTED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Group(GroupError::OrderBoundExceeded { .. })
            | CliError::Catalog(CatalogError::Group(GroupError::OrderBoundExceeded { .. })) => {
                EXIT_ORDER_BOUND
            }
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "sympres",
    version,
    about = "Symplectic reflection analysis of finite matrix groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Close the group, count symplectic reflections and issue a verdict.
    Analyze(AnalyzeArgs),
    /// Check resolution fiber dimensions against the stratification.
    Semismall {
        spec: PathBuf,
        fibers: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
    },
    /// Turn a linear action on W into a symplectic action on W ⊕ W*.
    Double {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Built-in group families.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Symplectic eigenvalues of a floating-point 2-form.
    Spectrum { input: PathBuf },
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub spec: PathBuf,
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    #[arg(long)]
    pub text: bool,
    /// Include the stratification summary.
    #[arg(long)]
    pub strata: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Print the listed fixtures with their expected orders and verdicts.
    List,
    /// Print the spec document for a named family member.
    Emit { name: String },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn exit_code_for(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::NecessaryConditionHolds => EXIT_OK,
        VerdictKind::NoSymplecticResolution => EXIT_OBSTRUCTED,
    }
}

/// Closure, reflection census, `G₀`, verdict and optionally the strata.
pub fn run_analyze(
    spec: &GroupSpec,
    with_strata: bool,
    max_order: usize,
) -> Result<AnalysisReport, CliError> {
    if spec.form.is_none() {
        return Err(CliError::Usage(
            "spec has no symplectic_form; run `double` first".into(),
        ));
    }
    let g = spec.close(max_order)?;
    let c = census(&g);
    let g0 = reflection_subgroup(&g, &c);
    let v = verdict_from(&g0);
    let reflections = c.symplectic_reflections();
    let class_count = g
        .conjugacy_classes()
        .iter()
        .filter(|class| c.is_symplectic_reflection(class[0]))
        .count();
    let z = z_locus_min_codim(&g, &g0, &c);
    let strata = with_strata.then(|| build_lattice(&g).orbit_summaries());
    Ok(AnalysisReport {
        name: spec.name.clone(),
        dimension: spec.dimension,
        conductor: spec.conductor,
        group_order: g.order(),
        reflection_count: reflections.len(),
        reflection_conjugacy_class_count: class_count,
        g0_order: v.g0_order,
        g0_index: v.g0_index,
        verdict: v.kind,
        dim2_duval_note: v.duval_note(spec.dimension),
        z_min_codim: (z <= spec.dimension).then_some(z),
        strata,
    })
}

pub fn run_semismall(
    spec: &GroupSpec,
    fibers: &[u8],
    max_order: usize,
) -> Result<SemismallReport, CliError> {
    let g = spec.close(max_order)?;
    let data = parse_fibers(fibers)?;
    Ok(semismall_check(&build_lattice(&g), &data)?)
}

pub fn run_double(spec: &GroupSpec) -> Result<GroupSpec, CliError> {
    if spec.form.is_some() {
        return Err(CliError::Usage(
            "spec already carries a symplectic_form; `double` expects a plain linear action".into(),
        ));
    }
    Ok(catalog::double_spec(spec)?)
}

fn format_semismall(report: &SemismallReport) -> String {
    let mut s = String::from("stratum  codim  fiber  result\n");
    for r in &report.rows {
        s.push_str(&format!(
            "{:>7}  {:>5}  {:>5}  {}\n",
            r.stratum,
            r.codim,
            r.fiber_dim,
            if r.passes { "pass" } else { "FAIL" }
        ));
    }
    s.push_str(if report.passes {
        "semismall: yes\n"
    } else {
        "semismall: no\n"
    });
    s
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

/// Runs one command, writing results to `out`, and returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze(args) => {
            let spec = GroupSpec::parse(&read(&args.spec)?)?;
            let report = run_analyze(&spec, args.strata, args.max_order)?;
            let text = if args.text {
                report.to_string()
            } else {
                report.to_json()
            };
            write_out(out, &text)?;
            Ok(exit_code_for(report.verdict))
        }
        Command::Semismall {
            spec,
            fibers,
            max_order,
        } => {
            let spec = GroupSpec::parse(&read(&spec)?)?;
            let report = run_semismall(&spec, &read(&fibers)?, max_order)?;
            write_out(out, &format_semismall(&report))?;
            Ok(if report.passes {
                EXIT_OK
            } else {
                EXIT_OBSTRUCTED
            })
        }
        Command::Double { spec, output } => {
            let doubled = run_double(&GroupSpec::parse(&read(&spec)?)?)?;
            match output {
                Some(path) => fs::write(&path, doubled.to_json())
                    .map_err(|source| CliError::Io { path, source })?,
                None => write_out(out, &doubled.to_json())?,
            }
            Ok(EXIT_OK)
        }
        Command::Catalog(CatalogCommand::List) => {
            let mut s = String::new();
            for e in catalog::entries() {
                s.push_str(&format!(
                    "{:<20} {:>10}  {}\n",
                    e.name,
                    e.expected_order,
                    e.expected_verdict.as_str()
                ));
            }
            write_out(out, &s)?;
            Ok(EXIT_OK)
        }
        Command::Catalog(CatalogCommand::Emit { name }) => {
            write_out(out, &catalog::spec_by_name(&name)?.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Spectrum { input } => {
            let form = parse_form_input(&read(&input)?)?;
            let lambdas = symplectic_eigenvalues(&form, Tolerances::default())?;
            let mut doc = json!({ "symplectic_eigenvalues": lambdas });
            if form.metric == nalgebra::DMatrix::identity(form.metric.nrows(), form.metric.ncols())
            {
                doc["pfaffian_abs"] = json!(pfaffian(&form.theta).norm());
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            write_out(out, &s)?;
            Ok(EXIT_OK)
        }
    }
}
