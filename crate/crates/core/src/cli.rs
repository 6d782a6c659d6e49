//! Command-line front end.
//!
//! Each command builds a [`Report`]; `run` parses arguments, loads and
//! validates the model, renders the report and maps the outcome to an exit
//! code: 0 when every verdict passes, 1 when some verdict fails (or a
//! computation is inconsistent), 2 on usage errors and 3 when the model does
//! not parse or validate.

use std::ffi::OsString;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::cohomology::{
    build_filtered_complex, lefschetz_decomp_check_with, resolution_check_with, strong_lefschetz, CohomologyError,
    DdLambdaCohomology, FilteredComplex, Sequence,
};
use crate::duality::{
    d_block_decomposition_with, dd_pairing_swapped_with, dd_pairing_with, diagram_check_all, frobenius_report,
    phi_duality_check, product_support_test, stokes_check, DualityError, PairingReport,
};
use crate::exterior::graded_dim;
use crate::fuzz;
use crate::model::{builtin, catalog_names, load_model_file, parse_rational, ModelError, SymplecticModel};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_MODEL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Duality(#[from] DualityError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_)
            | Self::Model(ModelError::UnknownModel { .. } | ModelError::Io { .. })
            | Self::Cohomology(CohomologyError::FilterOutOfRange { .. }) => EXIT_USAGE,
            Self::Model(_) => EXIT_INVALID_MODEL,
            Self::Cohomology(_) | Self::Duality(_) => EXIT_VERDICT,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_USAGE => "usage",
            EXIT_INVALID_MODEL => "invalid_model",
            _ => "computation",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "leflab", version, about = "Exact cohomology of invariant forms on symplectic nilmanifolds")]
struct Cli {
    /// Emit the versioned JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Multiply the Poisson bivector by this rational after validation (fault injection).
    #[arg(long, global = true, value_name = "FACTOR", allow_hyphen_values = true)]
    fault_lambda_scale: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArg {
    /// Catalog name or path to a model file.
    model: String,
}

#[derive(Debug, Args)]
struct Level {
    /// Filtration level, `0 <= p <= n`.
    #[arg(short = 'p')]
    p: usize,
}

#[derive(Debug, Args)]
struct Sampling {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a model.
    Check(ModelArg),
    /// Invariant de Rham cohomology and strong Lefschetz.
    Betti(ModelArg),
    /// The p-filtered complex, its cohomology and its duality.
    Filtered {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// The d + d^Lambda and dd^Lambda cohomologies with primitive parts.
    Ddl(ModelArg),
    /// Pairings at level p plus the dd^Lambda pairing and its blocks.
    Duality {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        level: Level,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// The two exact sequences resolving L^{p+1}.
    Resolution {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        level: Level,
    },
    /// Compatibility of the dd^Lambda pairing with the filtered pairings.
    Diagram(ModelArg),
    /// Seeded randomized law checking.
    Fuzz {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Every command at every level.
    Report {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        sampling: Sampling,
    },
}

impl Command {
    fn model(&self) -> &str {
        match self {
            Self::Check(m) | Self::Betti(m) | Self::Ddl(m) | Self::Diagram(m) => &m.model,
            Self::Filtered { model, .. }
            | Self::Duality { model, .. }
            | Self::Resolution { model, .. }
            | Self::Fuzz { model, .. }
            | Self::Report { model, .. } => &model.model,
        }
    }
}

/// Exit status plus the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let json = cli.json;
    let outcome = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| execute(&cli)),
        Ok(None) => execute(&cli),
        Err(e) => Err(e),
    };
    match outcome {
        Ok((code, report)) => Output {
            code,
            stdout: if json { report.to_json() + "\n" } else { report.render_text() },
            stderr: String::new(),
        },
        Err(e) => Output {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: diagnostic(&e, json),
        },
    }
}

fn diagnostic(e: &CliError, json: bool) -> String {
    if json {
        let value = serde_json::json!({
            "schema": "leflab.error/1",
            "kind": e.kind(),
            "exit_code": e.exit_code(),
            "message": e.to_string(),
        });
        format!("{value}\n")
    } else {
        format!("error[{}]: {e}\n", e.kind())
    }
}

/// A dedicated pool when `LEFLAB_THREADS` is set.
fn thread_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    let Ok(value) = std::env::var("LEFLAB_THREADS") else {
        return Ok(None);
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("LEFLAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

/// A catalog name, or else a path to a model file. The model is not validated.
pub fn resolve_model(name_or_path: &str) -> Result<SymplecticModel, CliError> {
    if catalog_names().contains(&name_or_path) {
        return Ok(builtin(name_or_path)?);
    }
    let path = Path::new(name_or_path);
    if path.exists() || name_or_path.ends_with(".json") || name_or_path.contains(std::path::MAIN_SEPARATOR) {
        return Ok(load_model_file(path)?);
    }
    Err(ModelError::UnknownModel {
        name: name_or_path.to_string(),
        catalog: catalog_names().join(", "),
    }
    .into())
}

fn execute(cli: &Cli) -> Result<(i32, Report), CliError> {
    let honest = resolve_model(cli.command.model())?;
    let validation = honest.validate();
    if !validation.passed() {
        if let Command::Check(_) = cli.command {
            return Ok((EXIT_INVALID_MODEL, check_report(&honest)));
        }
        validation.into_result(&honest)?;
    }
    let model = match &cli.fault_lambda_scale {
        None => honest,
        Some(text) => {
            let factor = parse_rational(text)
                .map_err(|e| CliError::Usage(format!("invalid --fault-lambda-scale `{text}`: {e}")))?;
            honest.with_lambda_scaled(&factor)
        }
    };
    let report = match &cli.command {
        Command::Check(_) => check_report(&model),
        Command::Betti(_) => betti_report(&model)?,
        Command::Filtered { level, sampling, .. } => {
            filtered_report(&model, checked_level(&model, level.p)?, sampling.seed, sampling.trials)?
        }
        Command::Ddl(_) => ddl_report(&model)?,
        Command::Duality { level, sampling, .. } => {
            duality_report(&model, checked_level(&model, level.p)?, sampling.seed, sampling.trials)?
        }
        Command::Resolution { level, .. } => resolution_report(&model, checked_level(&model, level.p)?)?,
        Command::Diagram(_) => diagram_report(&model)?,
        Command::Fuzz { sampling, .. } => fuzz::fuzz(&model, sampling.seed, sampling.trials),
        Command::Report { sampling, .. } => full_report(&model, sampling.seed, sampling.trials)?,
    };
    let code = if report.all_passed() { EXIT_OK } else { EXIT_VERDICT };
    Ok((code, report))
}

fn checked_level(model: &SymplecticModel, p: usize) -> Result<usize, CliError> {
    if p > model.n() {
        Err(CliError::Usage(format!("p = {p} exceeds n = {} for model `{}`", model.n(), model.name())))
    } else {
        Ok(p)
    }
}

/// Validation checks as verdicts.
pub fn check_report(model: &SymplecticModel) -> Report {
    let mut report = Report::new(model, "check");
    report
        .labels("model", vec![model.to_string()])
        .dimensions("cochain_dims", (0..=2 * model.n()).map(|k| graded_dim(model.n(), k)).collect());
    for c in model.validate().checks {
        report.verdict(c.name, c.witness.map_or(Ok(()), Err));
    }
    report
}

pub fn betti_report(model: &SymplecticModel) -> Result<Report, CliError> {
    let n = model.n();
    let derham = model.derham();
    let mut report = Report::new(model, "betti");
    report.dimensions("betti", derham.betti.clone());
    for space in &derham.spaces {
        let reps = space.representatives().iter().map(ToString::to_string).collect();
        report.labels(format!("classes.{}", space.degree()), reps);
    }
    let sl = strong_lefschetz(model)?;
    let summary = match &sl.failure {
        None => "holds".to_string(),
        Some((k, kernel)) => {
            let forms: Vec<String> = kernel.iter().map(|f| format!("[{f}]")).collect();
            format!("fails in degree {k}: kernel spanned by {}", forms.join(", "))
        }
    };
    report.labels("strong_lefschetz", vec![summary]);
    let b = &derham.betti;
    report.check("poincare_symmetry", (0..=2 * n).all(|k| b[k] == b[2 * n - k]), || {
        format!("betti numbers {b:?} are not palindromic")
    });
    Ok(report)
}

fn pairing_verdict(report: &mut Report, name: String, pr: &PairingReport) {
    let outcome = if !pr.nondegenerate {
        Err(format!(
            "{}^{} x {}^{}: {}x{} matrix of rank {}: {}",
            pr.left.theory, pr.left.degree, pr.right.theory, pr.right.degree,
            pr.matrix.rows(), pr.matrix.cols(), pr.rank, pr.matrix
        ))
    } else if !pr.annihilates_coboundaries {
        Err("coboundaries pair nontrivially".to_string())
    } else {
        Ok(())
    };
    report.verdict(name, outcome);
}

fn filtered_into(report: &mut Report, fc: &FilteredComplex<'_>, seed: u64, trials: usize) -> Result<(), CliError> {
    let top = fc.top_degree();
    let spaces = fc.space_dims();
    report.dimensions("spaces", spaces.clone());
    let composite = |k: usize| fc.differential(k + 1).mul(fc.differential(k)).expect("consecutive differentials compose");
    let d_squared = (0..top.saturating_sub(1)).find(|&k| !composite(k).is_zero());
    report.check("d_squared_zero", d_squared.is_none(), || {
        let k = d_squared.unwrap_or_default();
        format!("d_{} d_{k} = {}", k + 1, composite(k))
    });
    report.check("space_symmetry", (0..=top).all(|k| spaces[k] == spaces[top - k]), || {
        format!("dim F_p^k is not symmetric under k -> {top} - k: {spaces:?}")
    });
    let phi = phi_duality_check(fc, seed, trials.div_ceil(10).max(1))?;
    report.dimensions("cohomology", phi.dims.clone());
    report.check("cohomology_symmetry", phi.dims_symmetric, || {
        format!("dim F^pH^k is not symmetric under k -> {top} - k: {:?}", phi.dims)
    });
    for pr in &phi.pairings {
        report.matrix(format!("g.{}", pr.left.degree), &pr.matrix);
        pairing_verdict(report, format!("g.{}.nondegenerate", pr.left.degree), pr);
    }
    let signs = phi
        .adjoint_signs
        .iter()
        .enumerate()
        .map(|(c, s)| format!("d_{c}: {}", s.map_or("vacuous".to_string(), |s| format!("{s:+}"))))
        .collect();
    report.labels("adjoint_signs", signs);
    report.verdict("chain_adjointness", phi.witness.clone().map_or(Ok(()), Err));
    let stokes = stokes_check(fc, seed, trials)?;
    report.verdict("stokes", stokes.witness.map_or(Ok(()), Err));
    Ok(())
}

pub fn filtered_report(model: &SymplecticModel, p: usize, seed: u64, trials: usize) -> Result<Report, CliError> {
    let fc = build_filtered_complex(model, p)?;
    let mut report = Report::new(model, "filtered");
    report.parameter("p", p).parameter("seed", seed).parameter("trials", trials);
    filtered_into(&mut report, &fc, seed, trials)?;
    Ok(report)
}

pub fn ddl_report(model: &SymplecticModel) -> Result<Report, CliError> {
    let all = DdLambdaCohomology::compute(model)?;
    let mut report = Report::new(model, "ddl");
    let dims = |spaces: &[crate::cohomology::CohomologySpace]| spaces.iter().map(|s| s.dim()).collect();
    report
        .dimensions("h_d_plus_dlambda", dims(&all.plus))
        .dimensions("h_ddlambda", dims(&all.dd))
        .dimensions("ph_d_plus_dlambda", dims(&all.primitive_plus))
        .dimensions("ph_ddlambda", dims(&all.primitive_dd));
    for v in lefschetz_decomp_check_with(model, &all)? {
        let name = format!("decomposition.{}.{}", theory_key(v.theory), v.degree);
        let outcome = match (&v.witness, v.dim == v.primitive_sum) {
            (Some(w), _) => Err(w.clone()),
            (None, false) => Err(format!("dim {} != primitive sum {}", v.dim, v.primitive_sum)),
            (None, true) => Ok(()),
        };
        report.verdict(name, outcome);
    }
    Ok(report)
}

fn theory_key(theory: crate::cohomology::Theory) -> &'static str {
    use crate::cohomology::Theory;
    match theory {
        Theory::DeRham => "de_rham",
        Theory::Filtered { .. } => "filtered",
        Theory::DPlusDLambda => "d_plus_dlambda",
        Theory::DDLambda => "ddlambda",
        Theory::PrimitiveDPlusDLambda => "primitive_d_plus_dlambda",
        Theory::PrimitiveDDLambda => "primitive_ddlambda",
    }
}

fn duality_filtered_into(report: &mut Report, fc: &FilteredComplex<'_>) -> Result<(), CliError> {
    let signs = frobenius_report(fc)?
        .iter()
        .map(|e| {
            let sign = match (e.vacuous, e.sign) {
                (true, _) => "vacuous".to_string(),
                (false, Some(s)) => format!("{s:+}"),
                (false, None) => "none".to_string(),
            };
            format!("{} <-> {}: {sign}", e.degree, e.bar)
        })
        .collect();
    report.labels("graded_symmetry_signs", signs);
    Ok(())
}

fn ddlambda_duality_into(report: &mut Report, model: &SymplecticModel, seed: u64, trials: usize) -> Result<(), CliError> {
    let all = DdLambdaCohomology::compute(model)?;
    for k in 0..=2 * model.n() {
        let d = dd_pairing_with(model, &all, k)?;
        report.matrix(format!("dd_pairing.{k}"), &d.matrix);
        pairing_verdict(report, format!("dd_pairing.{k}"), &d);
        pairing_verdict(report, format!("dd_pairing_swapped.{k}"), &dd_pairing_swapped_with(model, &all, k)?);
        let blocks = d_block_decomposition_with(model, &all, k)?;
        report.verdict(format!("blocks.{k}.cross_zero"), blocks.witness.clone().map_or(Ok(()), Err));
        for b in &blocks.blocks {
            pairing_verdict(report, format!("blocks.{k}.r{}.s{}", b.r, b.s), &b.report);
        }
    }
    let support = product_support_test(model, seed, trials)?;
    report.verdict("product_support", support.witness.map_or(Ok(()), Err));
    Ok(())
}

pub fn duality_report(model: &SymplecticModel, p: usize, seed: u64, trials: usize) -> Result<Report, CliError> {
    let fc = build_filtered_complex(model, p)?;
    let mut report = Report::new(model, "duality");
    report.parameter("p", p).parameter("seed", seed).parameter("trials", trials);
    filtered_into(&mut report, &fc, seed, trials)?;
    duality_filtered_into(&mut report, &fc)?;
    ddlambda_duality_into(&mut report, model, seed, trials)?;
    Ok(report)
}

fn resolution_into(report: &mut Report, fc: &FilteredComplex<'_>) -> Result<(), CliError> {
    let verdicts = resolution_check_with(fc)?;
    for sequence in [Sequence::Plus, Sequence::Minus] {
        let key = match sequence {
            Sequence::Plus => "plus",
            Sequence::Minus => "minus",
        };
        let rows: Vec<_> = verdicts.iter().filter(|v| v.sequence == sequence).collect();
        report
            .dimensions(format!("{key}.coker"), rows.iter().map(|v| v.coker_dim).collect())
            .dimensions(format!("{key}.middle"), rows.iter().map(|v| v.middle_dim).collect())
            .dimensions(format!("{key}.ker"), rows.iter().map(|v| v.ker_dim).collect());
        for v in rows {
            let outcome = match (&v.witness, v.passed()) {
                (_, true) => Ok(()),
                (Some(w), false) => Err(w.clone()),
                (None, false) => Err(format!("{v:?}")),
            };
            report.verdict(format!("{key}.{}", v.degree), outcome);
        }
    }
    Ok(())
}

pub fn resolution_report(model: &SymplecticModel, p: usize) -> Result<Report, CliError> {
    let fc = build_filtered_complex(model, p)?;
    let mut report = Report::new(model, "resolution");
    report.parameter("p", p);
    resolution_into(&mut report, &fc)?;
    Ok(report)
}

pub fn diagram_report(model: &SymplecticModel) -> Result<Report, CliError> {
    let mut report = Report::new(model, "diagram");
    for v in diagram_check_all(model)? {
        let outcome = match (&v.witness, v.passed()) {
            (_, true) => Ok(()),
            (Some(w), false) => Err(w.clone()),
            (None, false) => Err(format!("{v:?}")),
        };
        report.verdict(format!("k{}.r{}.p{}", v.k, v.r, v.p_prime), outcome);
    }
    Ok(report)
}

/// Everything; levels are computed concurrently and assembled in order.
pub fn full_report(model: &SymplecticModel, seed: u64, trials: usize) -> Result<Report, CliError> {
    let mut report = Report::new(model, "report");
    report.parameter("seed", seed).parameter("trials", trials);
    report.absorb("check", check_report(model));
    report.absorb("betti", betti_report(model)?);
    report.absorb("ddl", ddl_report(model)?);
    let levels = (0..=model.n())
        .into_par_iter()
        .map(|p| -> Result<Report, CliError> {
            let fc = build_filtered_complex(model, p)?;
            let mut level = Report::new(model, "level");
            filtered_into(&mut level, &fc, seed, trials)?;
            duality_filtered_into(&mut level, &fc)?;
            resolution_into(&mut level, &fc)?;
            Ok(level)
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (p, level) in levels.into_iter().enumerate() {
        report.absorb(&format!("p{p}"), level);
    }
    let mut dd = Report::new(model, "ddlambda_duality");
    ddlambda_duality_into(&mut dd, model, seed, trials)?;
    report.absorb("duality", dd);
    report.absorb("diagram", diagram_report(model)?);
    report.absorb("fuzz", fuzz::fuzz(model, seed, trials));
    Ok(report)
}
