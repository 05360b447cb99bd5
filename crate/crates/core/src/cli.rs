//! Command-line front end: argument parsing, dispatch to the check suites,
//! and report files.
//!
//! Exit status: 0 when every check passes, 1 when some check fails, 2 on
//! configuration or usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{parse_grids, CorpusSource, RunConfig, Tolerances};
use crate::basespace::GridFunction;
use crate::crosscheck::{
    adjointness_suite, commutator_suite, marginal_suite, moments_suite, proofchain_check, seeded_function, wick_suite,
    GridSpec, NamedFunction,
};
use crate::error::{Error, Result};
use crate::meixner::MarginalLaw;
use crate::report::{CheckReport, Params};
use crate::tables::{fmt17, levy_table, marginal_table};
use crate::wick::{builtin_corpus, parse_c_value, parse_corpus, verify_identity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "swnlab", version, about = "Square-of-white-noise and Meixner Jacobi-field checks")]
pub struct Cli {
    /// Key-value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Comma-separated β values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    /// Moment-check grids as `atoms:mass`, comma separated.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Highest moment order (at most 8).
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    /// Replaces every tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Directory for report files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// json, csv or both.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relation residuals in both representations, adjointness and symmetry.
    Commutators,
    /// Symbolic identity corpus, or a single identity with `verify`.
    Wick(WickArgs),
    /// Three-way vacuum-moment comparison.
    Moments,
    /// Spectral moments, Gram matrix and single-atom reduction.
    Proofchain,
    /// Lévy-measure and marginal tables with normalization checks.
    Distributions {
        /// `|Δ|` values of the marginal tables, comma separated.
        #[arg(long, value_delimiter = ',')]
        marginal: Option<Vec<f64>>,
    },
    /// Every suite.
    All,
}

#[derive(Debug, Args)]
pub struct WickArgs {
    /// `builtin` or a path to a corpus file.
    #[arg(long)]
    pub corpus: Option<String>,
    #[command(subcommand)]
    pub action: Option<WickAction>,
}

#[derive(Debug, Subcommand)]
pub enum WickAction {
    /// Compares the canonical forms of two expressions.
    Verify {
        lhs: String,
        rhs: String,
        /// `sym` keeps c symbolic; a rational substitutes it.
        #[arg(long, default_value = "sym")]
        c: String,
    },
}

/// Configuration file first, then command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(b) = &cli.beta {
        cfg.betas = b.clone();
    }
    if let Some(g) = &cli.grid {
        cfg.grids = parse_grids(g).map_err(|m| Error::Config(format!("--grid: {m}")))?;
    }
    if let Some(k) = cli.kmax {
        cfg.k_max = k;
    }
    if let Some(t) = cli.tol {
        cfg.tolerances = Tolerances::uniform(t);
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse()?;
    }
    match &cli.command {
        Command::Distributions { marginal: Some(m) } => cfg.marginal_areas = m.clone(),
        Command::Wick(WickArgs { corpus: Some(c), .. }) => {
            cfg.corpus = if c == "builtin" { CorpusSource::Builtin } else { CorpusSource::File(c.into()) };
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Test functions of the moment check on each grid: `phi.<name>` entries
/// of matching length, or else the constant `one` and a seeded function.
pub fn moment_functions(cfg: &RunConfig) -> Result<Vec<(GridSpec, Vec<NamedFunction>)>> {
    cfg.grids
        .iter()
        .map(|spec| {
            let mut spec = *spec;
            spec.dim = cfg.dim;
            let grid = spec.build()?;
            let mut phis: Vec<NamedFunction> = cfg
                .phis
                .iter()
                .filter(|(_, v)| v.len() == grid.len())
                .map(|(name, v)| {
                    GridFunction::new(grid.clone(), v.clone()).map(|function| NamedFunction { name: name.clone(), function })
                })
                .collect::<Result<_>>()?;
            if phis.is_empty() {
                let seed = cfg.seeds[0];
                phis.push(NamedFunction { name: "one".into(), function: GridFunction::constant(grid.clone(), 1.0) });
                phis.push(NamedFunction { name: format!("seed{seed}"), function: seeded_function(&grid, seed) });
            }
            Ok((spec, phis))
        })
        .collect()
}

fn load_corpus(cfg: &RunConfig) -> Result<Vec<crate::wick::CorpusCase>> {
    match &cfg.corpus {
        CorpusSource::Builtin => Ok(builtin_corpus()),
        CorpusSource::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read corpus {}: {e}", path.display())))?;
            parse_corpus(&text)
        }
    }
}

pub fn commutator_reports(cfg: &RunConfig) -> Vec<CheckReport> {
    let grids: Vec<_> = cfg.commutator_grids.iter().map(|g| GridSpec { dim: cfg.dim, ..*g }).collect();
    let mut out = commutator_suite(&grids, &cfg.seeds, cfg.truncation, cfg.tolerances.commutator);
    let adj = GridSpec { dim: cfg.dim, ..cfg.adjoint_grid };
    out.extend(adjointness_suite(adj, &cfg.seeds, cfg.tolerances.adjoint));
    out
}

pub fn moment_reports(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    Ok(moments_suite(&cfg.betas, &moment_functions(cfg)?, cfg.k_max, cfg.tolerances.moments))
}

pub fn proofchain_reports(cfg: &RunConfig) -> Vec<CheckReport> {
    cfg.betas
        .par_iter()
        .flat_map_iter(|&beta| proofchain_check(beta, cfg.n_max, &cfg.areas, cfg.tolerances.chain))
        .collect()
}

/// Marginal checks plus one `table_mass` report per table; writes the
/// tables when `out` is given.
pub fn distribution_reports(cfg: &RunConfig, out: Option<&Path>) -> Result<Vec<CheckReport>> {
    let mut reports = marginal_suite(&cfg.betas, &cfg.marginal_areas, cfg.tolerances.marginal);
    for &beta in &cfg.betas {
        let levy = levy_table(beta, cfg.table_points)?;
        if let Some(dir) = out {
            levy.write_csv(create(&dir.join(format!("levy_beta{beta}.csv")))?)?;
        }
        for &area in &cfg.marginal_areas {
            let table = marginal_table(beta, area, cfg.table_points)?;
            if let Some(dir) = out {
                table.write_csv(create(&dir.join(format!("marginal_beta{beta}_area{area}.csv")))?)?;
            }
            let params = Params { beta: Some(beta), area: Some(area), ..Params::default() };
            let tol = cfg.tolerances.marginal;
            let r = MarginalLaw::new(beta, area).and_then(|law| law.total_mass()).map(|mass| {
                CheckReport::compare("table_mass", params.clone(), vec![mass], vec![1.0], tol).with_note(format!(
                    "tabulated column sums to {} over {} points",
                    fmt17(table.column_total),
                    cfg.table_points
                ))
            });
            reports.push(r.unwrap_or_else(|e| CheckReport::failure("table_mass", params, tol, &e)));
        }
    }
    Ok(reports)
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: &'a str,
    relation: &'a str,
    beta: String,
    phi: &'a str,
    grid: &'a str,
    order: String,
    area: String,
    truncation: &'a str,
    seed: String,
    lhs: String,
    rhs: String,
    abs_error: String,
    rel_error: String,
    tolerance: String,
    pass: bool,
    note: &'a str,
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(";")
}

pub fn write_reports_csv(reports: &[CheckReport], w: impl Write) -> Result<()> {
    let io = |e: csv::Error| Error::Config(format!("writing csv: {e}"));
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        let p = &r.params;
        let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
        out.serialize(CsvRow {
            check: &r.check,
            relation: p.relation.as_deref().unwrap_or(""),
            beta: opt(p.beta),
            phi: p.phi.as_deref().unwrap_or(""),
            grid: p.grid.as_deref().unwrap_or(""),
            order: p.order.map(|o| o.to_string()).unwrap_or_default(),
            area: opt(p.area),
            truncation: p.truncation.as_deref().unwrap_or(""),
            seed: p.seed.map(|s| s.to_string()).unwrap_or_default(),
            lhs: join(&r.lhs),
            rhs: join(&r.rhs),
            abs_error: fmt17(r.abs_error),
            rel_error: fmt17(r.rel_error),
            tolerance: fmt17(r.tolerance),
            pass: r.pass,
            note: r.note.as_deref().unwrap_or(""),
        })
        .map_err(io)?;
    }
    out.flush().map_err(|e| Error::Config(format!("writing csv: {e}")))?;
    Ok(())
}

/// Serializes reports as a pretty JSON array with a trailing newline.
pub fn reports_json(reports: &[CheckReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

fn emit(cfg: &RunConfig, name: &str, reports: &[CheckReport]) -> Result<()> {
    if cfg.format.json() {
        let path = cfg.out.join(format!("{name}.json"));
        fs::write(&path, reports_json(reports))
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    if cfg.format.csv() {
        write_reports_csv(reports, create(&cfg.out.join(format!("{name}.csv")))?)?;
    }
    Ok(())
}

/// Runs a subcommand and writes its report files; returns the reports.
pub fn run_suite(command: &Command, cfg: &RunConfig) -> Result<(String, Vec<CheckReport>)> {
    fs::create_dir_all(&cfg.out).map_err(|e| Error::Config(format!("cannot create {}: {e}", cfg.out.display())))?;
    let (name, reports) = match command {
        Command::Commutators => ("commutators", commutator_reports(cfg)),
        Command::Wick(_) => ("wick", wick_suite(&load_corpus(cfg)?)),
        Command::Moments => ("moments", moment_reports(cfg)?),
        Command::Proofchain => ("proofchain", proofchain_reports(cfg)),
        Command::Distributions { .. } => ("distributions", distribution_reports(cfg, Some(&cfg.out))?),
        Command::All => {
            let mut all = commutator_reports(cfg);
            all.extend(wick_suite(&load_corpus(cfg)?));
            all.extend(moment_reports(cfg)?);
            all.extend(proofchain_reports(cfg));
            all.extend(distribution_reports(cfg, Some(&cfg.out))?);
            ("all", all)
        }
    };
    emit(cfg, name, &reports)?;
    Ok((name.to_string(), reports))
}

/// Full CLI behaviour; diagnostics go to `out` and `err`.
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    if let Command::Wick(WickArgs { action: Some(WickAction::Verify { lhs, rhs, c }), .. }) = &cli.command {
        let verdict = parse_c_value(c).and_then(|c| verify_identity(lhs, rhs, c));
        return match verdict {
            Ok(v) => {
                let _ = writeln!(out, "{v}");
                if v.pass {
                    EXIT_OK
                } else {
                    EXIT_CHECK_FAILED
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_CONFIG
            }
        };
    }
    let cfg = match resolve_config(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    match run_suite(&cli.command, &cfg) {
        Ok((name, reports)) => {
            let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.pass).collect();
            for r in &failed {
                let _ = writeln!(
                    err,
                    "FAIL {} {} rel_error={:e} tol={:e}{}",
                    r.check,
                    serde_json::to_string(&r.params).expect("params serialize"),
                    r.rel_error,
                    r.tolerance,
                    r.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
                );
            }
            let _ = writeln!(
                out,
                "{name}: {}/{} checks passed, reports in {}",
                reports.len() - failed.len(),
                reports.len(),
                cfg.out.display()
            );
            if failed.is_empty() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}
