//! `ntlab`: identity suites, ratio sweeps, table cache and ₙ𝔾ₙ evaluation.

mod config;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::FileConfig;
use ntlab::cache::{self, SCHEMA_LINE};
use ntlab::classnumber::HurwitzTable;
use ntlab::ecurve::TraceTable;
use ntlab::ffield::{primes_in, FieldCtx};
use ntlab::identities::Claim;
use ntlab::kloosterman::{semicircle_chi2, KloostermanTable};
use ntlab::padic::{ngn_evaluate, GSpec, PadicCtx};
use ntlab::record::{sort_records, to_csv, to_json, VerificationRecord};
use ntlab::suite::{self, Suite, SuiteConfig, Theorem6};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ntlab",
    version,
    about = "Verification lab for fourth-power twisted Kloosterman moments"
)]
struct Cli {
    /// key=value run file; flags win over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    out: Option<OutFmt>,
    /// Fill the elapsed_ms column (output is then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// Cache directory (default: $NTLAB_CACHE or ./.ntlab-cache).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFmt {
    Csv,
    Json,
}

impl std::str::FromStr for OutFmt {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <OutFmt as ValueEnum>::from_str(s, true)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity suites over a prime range.
    Verify(VerifyArgs),
    /// Normalized-ratio sweeps and angle histograms.
    Sweep(SweepArgs),
    /// Build or inspect the on-disk tables.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Evaluate ₃𝔾₃ or ₉𝔾₉ at one point.
    Gfun(GfunArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites (comma separated): all, eichler, or any of moments, s4-triroute, cp, ap-chain,
    /// torsion, schoof, counting, census, gk, products, greene, prop6.4, prop6.5, prop6.6.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long)]
    pmin: Option<u32>,
    #[arg(long)]
    pmax: Option<u32>,
    /// Upper bound on odd n for the eichler suite.
    #[arg(long)]
    nmax: Option<u64>,
    /// p-adic precision exponent.
    #[arg(long = "K")]
    k: Option<u32>,
    #[arg(long)]
    brute_cap: Option<u32>,
    #[arg(long)]
    schoof_cap: Option<u32>,
    #[arg(long)]
    gk_samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cohen_threshold: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// thm1.1, cor1.2, prop4.4, prop4.6, prop4.8, prop4.9, thm6.2, thm6.3 or angles.
    #[arg(long)]
    claim: Option<String>,
    #[arg(long)]
    pmin: Option<u32>,
    #[arg(long)]
    pmax: Option<u32>,
    /// Ratio threshold (default 4).
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long = "K")]
    k: Option<u32>,
    /// Prime for the angle histogram.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Build hurwitz.csv up to a discriminant bound, and optionally ap_<p>.csv tables.
    Build {
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        ap_pmin: Option<u32>,
        #[arg(long)]
        ap_pmax: Option<u32>,
    },
    /// Report table bounds and row counts.
    Inspect,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "3g3")]
    G3,
    #[value(name = "9g9")]
    G9,
}

#[derive(Args)]
struct GfunArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    lambda: u32,
    #[arg(long = "K")]
    k: Option<u32>,
}

struct Common {
    out: OutFmt,
    timings: bool,
    cache: PathBuf,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    if let Some(n) = file.pick(cli.workers, "workers")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")?;
    }
    let common = Common {
        out: file.pick(cli.out, "out")?.unwrap_or(OutFmt::Csv),
        timings: file.flag(cli.timings, "timings")?,
        cache: file
            .pick(cli.cache, "cache")?
            .unwrap_or_else(cache::cache_dir),
    };
    match cli.cmd {
        Cmd::Verify(a) => cmd_verify(a, &file, &common),
        Cmd::Sweep(a) => cmd_sweep(a, &file, &common),
        Cmd::Cache { action } => cmd_cache(action, &file, &common),
        Cmd::Gfun(a) => cmd_gfun(a, &file, &common),
    }
}

fn emit(records: &[VerificationRecord], c: &Common) -> Result<ExitCode> {
    let body = match c.out {
        OutFmt::Csv => to_csv(records, c.timings)?,
        OutFmt::Json => to_json(records, c.timings) + "\n",
    };
    std::io::stdout().lock().write_all(body.as_bytes())?;
    let failures = records.iter().filter(|r| r.is_failure()).count();
    let over = records
        .iter()
        .filter(|r| r.ratio.is_some() && !r.matched)
        .count();
    eprintln!(
        "{} records, {failures} exact failures, {over} ratios over threshold",
        records.len()
    );
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn prime_range(pmin: u32, pmax: u32) -> Result<Vec<u32>> {
    if pmin > pmax {
        bail!("empty prime range [{pmin}, {pmax}]");
    }
    Ok(primes_in(pmin.max(3) as u64, pmax as u64))
}

fn cmd_verify(a: VerifyArgs, file: &FileConfig, c: &Common) -> Result<ExitCode> {
    let names: Vec<String> = if a.suite.is_empty() {
        file.pick::<String>(None, "suite")?
            .map(|s| s.split(',').map(|x| x.trim().to_string()).collect())
            .unwrap_or_else(|| vec!["all".into()])
    } else {
        a.suite
    };
    let mut suites = Vec::new();
    let mut eichler = false;
    for n in &names {
        match n.as_str() {
            "all" => suites.extend(Suite::ALL),
            "eichler" => eichler = true,
            s => suites.push(s.parse::<Suite>()?),
        }
    }
    let mut seen = std::collections::HashSet::new();
    suites.retain(|s| seen.insert(*s));
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig {
        k: file.pick(a.k, "K")?.unwrap_or(defaults.k),
        brute_cap: file
            .pick(a.brute_cap, "brute_cap")?
            .unwrap_or(defaults.brute_cap),
        schoof_cap: file
            .pick(a.schoof_cap, "schoof_cap")?
            .unwrap_or(defaults.schoof_cap),
        gk_samples: file
            .pick(a.gk_samples, "gk_samples")?
            .unwrap_or(defaults.gk_samples),
        seed: file.pick(a.seed, "seed")?.unwrap_or(defaults.seed),
        ..defaults
    };
    let pmin = file.pick(a.pmin, "pmin")?.unwrap_or(7);
    let pmax = file.pick(a.pmax, "pmax")?.unwrap_or(97);
    let nmax = file.pick(a.nmax, "nmax")?.unwrap_or(999);
    let cohen = file
        .pick(a.cohen_threshold, "cohen_threshold")?
        .unwrap_or(0.01);

    let mut bound = suite::hurwitz_bound(&suites, pmax);
    if eichler {
        bound = Some(bound.unwrap_or(0).max(nmax));
    }
    let table = bound
        .map(|b| cache::load_or_build_hurwitz(&c.cache, b))
        .transpose()
        .with_context(|| format!("hurwitz cache in {}", c.cache.display()))?;

    let mut records = if suites.is_empty() {
        Vec::new()
    } else {
        suite::run_suites(&suites, &prime_range(pmin, pmax)?, &cfg, table.as_ref())
    };
    if eichler {
        records.extend(suite::eichler_sweep(
            table.as_ref().expect("table built"),
            nmax,
            cohen,
        ));
        sort_records(&mut records);
    }
    emit(&records, c)
}

fn cmd_sweep(a: SweepArgs, file: &FileConfig, c: &Common) -> Result<ExitCode> {
    let claim = file
        .pick(a.claim, "claim")?
        .context("--claim is required")?;
    let pmin = file.pick(a.pmin, "pmin")?;
    let pmax = file.pick(a.pmax, "pmax")?;
    let k = file.pick(a.k, "K")?.unwrap_or(ntlab::padic::DEFAULT_K);
    match claim.as_str() {
        "angles" => {
            let p = file.pick(a.p, "p")?.context("--p is required for angles")?;
            let bins = file.pick(a.bins, "bins")?.unwrap_or(20);
            angles(p, bins, c)
        }
        "thm6.2" | "thm6.3" => {
            let which = if claim == "thm6.2" {
                Theorem6::Thm62
            } else {
                Theorem6::Thm63
            };
            let primes = prime_range(pmin.unwrap_or(7), pmax.unwrap_or(300))?;
            emit(&suite::theorem6_sweep(which, &primes, k), c)
        }
        name => {
            let claim: Claim = name.parse()?;
            let threshold = file
                .pick(a.threshold, "threshold")?
                .unwrap_or(claim.default_threshold());
            let (lo, hi) = (pmin.unwrap_or(100), pmax.unwrap_or(2000));
            let table = cache::load_or_build_hurwitz(&c.cache, 4 * hi as u64)
                .with_context(|| format!("hurwitz cache in {}", c.cache.display()))?;
            emit(
                &suite::claim_sweep(claim, &prime_range(lo, hi)?, &table, threshold),
                c,
            )
        }
    }
}

fn angles(p: u32, bins: usize, c: &Common) -> Result<ExitCode> {
    if bins == 0 {
        bail!("--bins must be positive");
    }
    let f = FieldCtx::new(p as u64)?;
    let hist = KloostermanTable::new(&f).angle_histogram(bins);
    let total: u64 = hist.iter().sum();
    let pi = std::f64::consts::PI;
    let cdf = |t: f64| (t - t.sin() * t.cos()) / pi;
    let rows: Vec<(usize, f64, f64, u64, f64)> = hist
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let lo = pi * i as f64 / bins as f64;
            let hi = pi * (i + 1) as f64 / bins as f64;
            (i, lo, hi, n, total as f64 * (cdf(hi) - cdf(lo)))
        })
        .collect();
    let mut out = std::io::stdout().lock();
    match c.out {
        OutFmt::Csv => {
            writeln!(out, "{SCHEMA_LINE}")?;
            writeln!(out, "bin,theta_lo,theta_hi,count,expected")?;
            for (i, lo, hi, n, e) in rows {
                writeln!(out, "{i},{lo:.6},{hi:.6},{n},{e:.6}")?;
            }
        }
        OutFmt::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|&(i, lo, hi, n, e)| {
                    serde_json::json!({"bin": i, "theta_lo": lo, "theta_hi": hi, "count": n, "expected": e})
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
    }
    eprintln!(
        "p = {p}, {total} angles, chi2/N = {:.6}",
        semicircle_chi2(&hist)
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_cache(action: CacheAction, file: &FileConfig, c: &Common) -> Result<ExitCode> {
    let dir = &c.cache;
    match action {
        CacheAction::Build {
            bound,
            ap_pmin,
            ap_pmax,
        } => {
            let bound = file.pick(bound, "bound")?.unwrap_or(20000);
            let t = cache::load_or_build_hurwitz(dir, bound)
                .with_context(|| format!("hurwitz cache in {}", dir.display()))?;
            eprintln!("{}: bound {}", dir.join("hurwitz.csv").display(), t.bound());
            if let Some(hi) = file.pick(ap_pmax, "ap_pmax")? {
                let lo = file.pick(ap_pmin, "ap_pmin")?.unwrap_or(5);
                for p in prime_range(lo, hi)? {
                    let f = FieldCtx::new(p as u64)?;
                    cache::write_ap(dir, &TraceTable::new(&f))
                        .with_context(|| format!("writing {}", cache::ap_path(dir, p).display()))?;
                }
                eprintln!("ap tables for primes in [{lo}, {hi}]");
            }
        }
        CacheAction::Inspect => {
            let path = dir.join("hurwitz.csv");
            let mut out = std::io::stdout().lock();
            writeln!(out, "cache: {}", dir.display())?;
            if path.exists() {
                let t: HurwitzTable = cache::read_hurwitz(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                writeln!(
                    out,
                    "hurwitz.csv: bound {}, {} rows",
                    t.bound(),
                    t.rows().count()
                )?;
            } else {
                writeln!(out, "hurwitz.csv: absent")?;
            }
            let mut ps: Vec<u32> = match std::fs::read_dir(dir) {
                Ok(rd) => rd
                    .filter_map(|e| e.ok())
                    .filter_map(|e| {
                        let name = e.file_name().into_string().ok()?;
                        name.strip_prefix("ap_")?.strip_suffix(".csv")?.parse().ok()
                    })
                    .collect(),
                Err(_) => Vec::new(),
            };
            ps.sort_unstable();
            match (ps.first(), ps.last()) {
                (Some(lo), Some(hi)) => {
                    writeln!(out, "ap tables: {} primes in [{lo}, {hi}]", ps.len())?
                }
                _ => writeln!(out, "ap tables: none")?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gfun(a: GfunArgs, file: &FileConfig, c: &Common) -> Result<ExitCode> {
    let k = file.pick(a.k, "K")?.unwrap_or(ntlab::padic::DEFAULT_K);
    let ctx = PadicCtx::new(a.p as u64, k)?;
    let (family, spec) = match a.family {
        Family::G3 => ("3g3", GSpec::g3(&ctx, a.lambda)?),
        Family::G9 => ("9g9", GSpec::g9(&ctx, a.lambda)?),
    };
    let v = ngn_evaluate(&ctx, &spec)?;
    let mut out = std::io::stdout().lock();
    match c.out {
        OutFmt::Csv => {
            writeln!(out, "{SCHEMA_LINE}")?;
            writeln!(out, "p,family,lambda,t,K,valuation,unit,abs_prec,value")?;
            writeln!(
                out,
                "{},{family},{},{},{k},{},{},{},{v}",
                a.p,
                a.lambda,
                spec.t,
                v.valuation,
                v.unit,
                v.abs_prec()
            )?;
        }
        OutFmt::Json => {
            let j = serde_json::json!({
                "p": a.p, "family": family, "lambda": a.lambda, "t": spec.t, "K": k,
                "valuation": v.valuation, "unit": v.unit, "abs_prec": v.abs_prec(),
                "zero": v.zero, "value": v.to_string(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
