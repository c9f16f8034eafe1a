//! Command-line front end.
//!
//! Every setting is a flag; nothing is read from the environment.
//! Exit codes: 0 when nothing failed, 1 when a verification failed,
//! 2 on usage or configuration errors.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::closed_forms::{Family, XYPair};
use crate::numerics::{make_context, PrecisionContext, Real};
use crate::registry::{builtin_catalog, load_catalog_file, scan_perfect_square, Catalog, IdentityRecord};
use crate::sequences::HoradamParams;
use crate::series::sum_series;
use crate::verifier::{
    differential_check, standard_grid, sweep, verify_all_with_jobs, Grid, Summary, Transition, BOUNDARY_TARGET, GUARD,
};
use crate::{Error, Result};

pub use report::{render_eval, render_list, render_reports, render_scan, Format};

#[derive(Debug, Parser)]
#[command(name = "tribinom", version, about = "Verify closed forms of series over C(3k,k)")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Target decimal digits.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(5..=1000))]
    pub digits: u32,
    /// Most series terms summed directly.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(64..))]
    pub max_terms: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Parallel verifications (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List catalog records.
    List {
        #[arg(long)]
        tag: Option<String>,
    },
    /// Evaluate both sides of records without judging them.
    Eval {
        #[arg(long, required = true)]
        id: Vec<String>,
    },
    /// Verify selected records.
    Verify {
        #[arg(long, required = true)]
        id: Vec<String>,
    },
    /// Verify the whole catalog.
    VerifyAll {
        #[arg(long)]
        tag: Option<String>,
    },
    /// Verify a theorem family over a parameter grid.
    Sweep(SweepArgs),
    /// Positive arguments with 81 - 12z a perfect square.
    Scan {
        #[arg(long, default_value_t = 8)]
        t_max: u64,
    },
    /// Compare level identities with numerical derivatives of the level above.
    CheckDerivatives {
        #[arg(long, value_parser = Transition::from_str)]
        transition: Option<Transition>,
        /// `x,y`; defaults to (9,1) and (27,8).
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        pair: Vec<(i64, i64)>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Family name such as THM1_FIB or THM3_V2, or `all`.
    #[arg(long)]
    pub family: String,
    /// Values of r: `1..8` or `1,2,5`.
    #[arg(long)]
    pub r: Option<String>,
    /// Values of n for THM3; m runs over 1..=n.
    #[arg(long)]
    pub n: Option<String>,
    /// `(p, q)` pairs: `-2:5,-3:6`.
    #[arg(long, allow_hyphen_values = true)]
    pub pq: Option<String>,
    /// Horadam parameters `p,q,a,b`.
    #[arg(long, allow_hyphen_values = true)]
    pub horadam: Option<String>,
}

fn bad_flag(flag: &str) -> impl Fn(String) -> Error + '_ {
    move |msg| Error::InvalidParams(format!("--{flag}: {msg}"))
}

fn parse_list(s: &str) -> std::result::Result<Vec<i64>, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
        let hi = hi.trim_start_matches('=');
        let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("{t}: {e}")))
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once([',', ':'])
        .ok_or_else(|| format!("expected two integers in {s:?}"))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_pairs(s: &str) -> std::result::Result<Vec<(i64, i64)>, String> {
    s.split(',')
        .map(|t| {
            let (p, q) = t.split_once(':').ok_or_else(|| format!("expected p:q in {t:?}"))?;
            parse_pair(&format!("{p},{q}"))
        })
        .collect()
}

fn parse_horadam(s: &str) -> std::result::Result<HoradamParams, String> {
    let v: Vec<i64> = parse_list(s)?;
    if v.len() != 4 {
        return Err(format!("expected p,q,a,b in {s:?}"));
    }
    HoradamParams::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

/// Outcome of a command before it is written out.
struct Output {
    text: String,
    failed: bool,
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&config) {
        Ok(out) => match emit(&config.opts, &out.text) {
            Ok(()) => i32::from(out.failed),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(opts: &Options, text: &str) -> std::io::Result<()> {
    match &opts.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn catalog(opts: &Options) -> Result<Catalog> {
    match &opts.catalog {
        Some(path) => load_catalog_file(path),
        None => Ok(builtin_catalog()),
    }
}

fn jobs(opts: &Options) -> usize {
    opts.jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn selected(catalog: &Catalog, ids: &[String]) -> Result<Catalog> {
    let records = ids
        .iter()
        .map(|id| {
            catalog
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Catalog(format!("no record with id {id:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Catalog::new(records)
}

fn reports_output(opts: &Options, summary: Summary) -> Result<Output> {
    Ok(Output {
        failed: !summary.all_ok(),
        text: render_reports(&summary, opts.digits, opts.format)?,
    })
}

fn execute(config: &CliConfig) -> Result<Output> {
    let opts = &config.opts;
    let ctx = make_context(opts.digits, opts.max_terms)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(opts))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    match &config.command {
        Command::List { tag } => {
            let cat = catalog(opts)?;
            let records: Vec<_> = cat
                .iter()
                .filter(|r| tag.as_ref().map_or(true, |t| r.has_tag(t)))
                .collect();
            Ok(Output {
                text: render_list(&records, opts.format)?,
                failed: false,
            })
        }
        Command::Eval { id } => {
            let cat = selected(&catalog(opts)?, id)?;
            let work = ctx.with_target(opts.digits + GUARD)?;
            let rows: Vec<_> = cat.iter().map(|r| evaluate(r, opts.digits, &work)).collect();
            Ok(Output {
                failed: false,
                text: render_eval(&rows, opts.digits, opts.format)?,
            })
        }
        Command::Verify { id } => {
            let cat = selected(&catalog(opts)?, id)?;
            reports_output(opts, verify_all_with_jobs(&cat, opts.digits, &ctx, jobs(opts))?)
        }
        Command::VerifyAll { tag } => {
            let cat = catalog(opts)?;
            let cat = match tag {
                Some(t) => Catalog::new(cat.with_tag(t).cloned().collect())?,
                None => cat,
            };
            reports_output(opts, verify_all_with_jobs(&cat, opts.digits, &ctx, jobs(opts))?)
        }
        Command::Sweep(args) => {
            let families: Vec<Family> = if args.family.eq_ignore_ascii_case("all") {
                Family::all().to_vec()
            } else {
                vec![args.family.parse()?]
            };
            let mut reports = Vec::new();
            for family in families {
                let grid = sweep_grid(family, args)?;
                reports.extend(pool.install(|| sweep(family, &grid, opts.digits, &ctx))?);
            }
            reports_output(opts, Summary::from_reports(reports))
        }
        Command::Scan { t_max } => Ok(Output {
            text: render_scan(&scan_perfect_square(*t_max), opts.format)?,
            failed: false,
        }),
        Command::CheckDerivatives { transition, pair } => {
            let pairs = if pair.is_empty() { vec![(9, 1), (27, 8)] } else { pair.clone() };
            let transitions = match transition {
                Some(t) => vec![*t],
                None => vec![Transition::AToB, Transition::BToC],
            };
            let mut reports = Vec::new();
            for &(x, y) in &pairs {
                for &t in &transitions {
                    let p = XYPair::new(ctx.real(x), ctx.real(y));
                    reports.push(differential_check(t, &p, opts.digits, &ctx)?);
                }
            }
            reports_output(opts, Summary::from_reports(reports))
        }
    }
}

fn sweep_grid(family: Family, args: &SweepArgs) -> Result<Grid> {
    let r = args.r.as_deref().map(parse_list).transpose().map_err(bad_flag("r"))?;
    Ok(match family {
        Family::Thm3(_) => match &args.n {
            Some(n) => Grid::triangle(parse_list(n).map_err(bad_flag("n"))?, false),
            None => standard_grid(family),
        },
        Family::Thm7(_) | Family::Thm9(_) | Family::Thm10(_) => match &args.pq {
            Some(pq) => Grid::PQ(parse_pairs(pq).map_err(bad_flag("pq"))?),
            None => standard_grid(family),
        },
        Family::HoradamA2 | Family::HoradamA1 => {
            let Grid::Horadam { params, r: default_r } = standard_grid(family) else {
                unreachable!("Horadam families have Horadam grids")
            };
            let params = match &args.horadam {
                Some(h) => parse_horadam(h).map_err(bad_flag("horadam"))?,
                None => params,
            };
            Grid::Horadam {
                params,
                r: r.unwrap_or(default_r),
            }
        }
        _ => match r {
            Some(r) => Grid::R(r),
            None => standard_grid(family),
        },
    })
}

/// Both sides of a record, without a verdict.
pub struct EvalRow {
    pub id: String,
    pub class: String,
    pub lhs: Option<Real>,
    pub rhs: Option<Real>,
    pub terms_used: u64,
    pub note: String,
}

fn evaluate(record: &IdentityRecord, digits: u32, ctx: &PrecisionContext) -> EvalRow {
    let mut row = EvalRow {
        id: record.id.clone(),
        class: record.convergence.to_string(),
        lhs: None,
        rhs: None,
        terms_used: 0,
        note: String::new(),
    };
    let mut notes = Vec::new();
    match record.rhs.eval(ctx) {
        Ok(v) => row.rhs = Some(v),
        Err(e) => notes.push(format!("rhs: {e}")),
    }
    let digits = if record.convergence.is_boundary() { digits.min(BOUNDARY_TARGET) } else { digits };
    match sum_series(&record.lhs, digits, ctx.max_expected_terms(), ctx) {
        Ok(s) => {
            row.lhs = Some(s.value);
            row.terms_used = s.terms_used;
        }
        Err(e) => notes.push(format!("lhs: {e}")),
    }
    row.note = notes.join("; ");
    row
}
