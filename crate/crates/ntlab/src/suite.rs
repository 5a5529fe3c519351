//! Named identity suites and sweeps over primes, shared by the command line
//! and the acceptance harness.

use crate::classnumber::HurwitzTable;
use crate::ecurve::TraceTable;
use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::identities::{self as id, Claim};
use crate::kloosterman::KloostermanTable;
use crate::padic::{self, PadicCtx};
use crate::record::{sort_records, timed, VerificationRecord as Rec};
use rayon::prelude::*;
use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Moments,
    S4Triroute,
    Cp,
    ApChain,
    Torsion,
    Schoof,
    Counting,
    Census,
    Gk,
    Products,
    Greene,
    Prop64,
    Prop65,
    Prop66,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Moments,
        Suite::S4Triroute,
        Suite::Cp,
        Suite::ApChain,
        Suite::Torsion,
        Suite::Schoof,
        Suite::Counting,
        Suite::Census,
        Suite::Gk,
        Suite::Products,
        Suite::Greene,
        Suite::Prop64,
        Suite::Prop65,
        Suite::Prop66,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::S4Triroute => "s4-triroute",
            Suite::Cp => "cp",
            Suite::ApChain => "ap-chain",
            Suite::Torsion => "torsion",
            Suite::Schoof => "schoof",
            Suite::Counting => "counting",
            Suite::Census => "census",
            Suite::Gk => "gk",
            Suite::Products => "products",
            Suite::Greene => "greene",
            Suite::Prop64 => "prop6.4",
            Suite::Prop65 => "prop6.5",
            Suite::Prop66 => "prop6.6",
        }
    }

    /// Residue and size filters; primes outside them are skipped silently.
    pub fn applies(self, p: u32, cfg: &SuiteConfig) -> bool {
        match self {
            Suite::Cp => p <= cfg.brute_cap,
            Suite::Schoof => p <= cfg.schoof_cap,
            Suite::Counting => p % 4 == 1,
            Suite::Census => p > 5,
            Suite::Prop64 => p % 3 == 1,
            Suite::Prop65 => p % 3 == 2,
            _ => true,
        }
    }

    fn uses_hurwitz(self) -> bool {
        matches!(
            self,
            Suite::S4Triroute | Suite::Schoof | Suite::Counting | Suite::Census
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s}")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// p-adic precision exponent.
    pub k: u32,
    pub brute_cap: u32,
    pub schoof_cap: u32,
    /// Gross–Koblitz checks are exhaustive up to this p, sampled beyond.
    pub gk_exhaustive_max: u32,
    pub gk_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            k: padic::DEFAULT_K,
            brute_cap: 100,
            schoof_cap: 200,
            gk_exhaustive_max: 50,
            gk_samples: 50,
            seed: 0x6e746c6162,
        }
    }
}

/// Per-prime contexts, built on first use.
pub struct PrimeData {
    pub field: FieldCtx,
    k: u32,
    kt: OnceCell<KloostermanTable>,
    traces: OnceCell<TraceTable>,
    padic: OnceCell<Result<PadicCtx>>,
}

impl PrimeData {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Ok(PrimeData {
            field: FieldCtx::new(p as u64)?,
            k,
            kt: OnceCell::new(),
            traces: OnceCell::new(),
            padic: OnceCell::new(),
        })
    }

    pub fn kt(&self) -> &KloostermanTable {
        self.kt.get_or_init(|| KloostermanTable::new(&self.field))
    }

    pub fn traces(&self) -> &TraceTable {
        self.traces.get_or_init(|| TraceTable::new(&self.field))
    }

    pub fn padic(&self) -> Result<&PadicCtx> {
        self.padic
            .get_or_init(|| PadicCtx::new(self.field.p() as u64, self.k))
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn run_one(
    suite: Suite,
    d: &PrimeData,
    cfg: &SuiteConfig,
    table: Option<&HurwitzTable>,
) -> Result<Vec<Rec>> {
    let f = &d.field;
    let table = || table.ok_or_else(|| Error::InvalidArgument("hurwitz table required".into()));
    Ok(match suite {
        Suite::Moments => id::moment_closed_forms(f, d.kt())?,
        Suite::S4Triroute => id::s4_triroute(f, d.kt(), d.traces(), table()?)?,
        Suite::Cp => id::cp_count_checks(f, d.kt(), cfg.brute_cap)?,
        Suite::ApChain => vec![id::ap_second_moment_check(f, d.kt(), d.traces())?],
        Suite::Torsion => id::torsion_criteria(f, d.traces())?,
        Suite::Schoof => id::schoof_suite(f, table()?, cfg.schoof_cap)?,
        Suite::Counting => vec![id::counting_lemma_check(f, table()?)?],
        Suite::Census => id::torsion_census_check(f, d.traces(), table()?)?,
        Suite::Gk => {
            let random = if f.p() <= cfg.gk_exhaustive_max {
                0
            } else {
                cfg.gk_samples
            };
            padic::gk_suite(d.padic()?, random, cfg.seed)?
        }
        Suite::Products => padic::gauss_product_suite(d.padic()?)?,
        Suite::Greene => padic::greene_trace_checks(d.padic()?, d.traces())?,
        Suite::Prop64 => padic::prop64_check(d.padic()?)?,
        Suite::Prop65 => padic::prop65_check(d.padic()?)?,
        Suite::Prop66 => padic::prop66_check(d.padic()?, d.traces())?,
    })
}

/// A failing exact record standing in for a suite that raised an error.
fn error_record(p: u32, suite: Suite, e: &Error) -> Rec {
    Rec::exact_with(
        p as u64,
        &format!("{suite}-error"),
        e.to_string(),
        "ok",
        false,
    )
}

/// Run `suites` at every prime in `primes` they apply to. Errors become
/// failing records; the sweep itself never aborts.
pub fn run_suites(
    suites: &[Suite],
    primes: &[u32],
    cfg: &SuiteConfig,
    table: Option<&HurwitzTable>,
) -> Vec<Rec> {
    let mut out: Vec<Rec> = primes
        .par_iter()
        .flat_map_iter(|&p| {
            let d = PrimeData::new(p, cfg.k);
            let mut recs = Vec::new();
            for &s in suites {
                if !s.applies(p, cfg) {
                    continue;
                }
                let d = match &d {
                    Ok(d) => d,
                    Err(e) => {
                        recs.push(error_record(p, s, e));
                        continue;
                    }
                };
                recs.extend(timed(|| match run_one(s, d, cfg, table) {
                    Ok(v) => v,
                    Err(e) => vec![error_record(p, s, &e)],
                }));
            }
            recs
        })
        .collect();
    sort_records(&mut out);
    out
}

/// D-bound of the Hurwitz table needed by `suites` up to pmax.
pub fn hurwitz_bound(suites: &[Suite], pmax: u32) -> Option<u64> {
    suites
        .iter()
        .any(|s| s.uses_hurwitz())
        .then_some(4 * pmax as u64)
}

/// Eichler and Cohen records for every odd n ≤ nmax.
pub fn eichler_sweep(table: &HurwitzTable, nmax: u64, cohen_threshold: f64) -> Vec<Rec> {
    let ns: Vec<u64> = (1..=nmax).step_by(2).collect();
    let mut out: Vec<Rec> = ns
        .par_iter()
        .flat_map_iter(|&n| {
            timed(|| {
                id::eichler_records(table, n, cohen_threshold).unwrap_or_else(|e| {
                    vec![Rec::exact_with(
                        n,
                        "eichler-error",
                        e.to_string(),
                        "ok",
                        false,
                    )]
                })
            })
        })
        .collect();
    sort_records(&mut out);
    out
}

/// Normalized-ratio records for one claim.
pub fn claim_sweep(claim: Claim, primes: &[u32], table: &HurwitzTable, threshold: f64) -> Vec<Rec> {
    let mut out: Vec<Rec> = primes
        .par_iter()
        .filter(|&&p| claim.applies(p))
        .map(|&p| {
            let run = || -> Result<Rec> {
                let f = FieldCtx::new(p as u64)?;
                let kt = claim.needs_moments().then(|| KloostermanTable::new(&f));
                id::asymptotic_record(&f, claim, kt.as_ref(), table, threshold)
            };
            let t = std::time::Instant::now();
            run()
                .unwrap_or_else(|e| {
                    Rec::exact_with(
                        p as u64,
                        &format!("{claim}-error"),
                        e.to_string(),
                        "ok",
                        false,
                    )
                })
                .with_elapsed(t.elapsed())
        })
        .collect();
    sort_records(&mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem6 {
    Thm62,
    Thm63,
}

impl Theorem6 {
    pub fn applies(self, p: u32) -> bool {
        p > 5
            && match self {
                Theorem6::Thm62 => p % 3 == 1,
                Theorem6::Thm63 => p % 3 == 2,
            }
    }
}

/// |T(p)| records for Theorem 6.2 or 6.3 at every admissible prime.
pub fn theorem6_sweep(which: Theorem6, primes: &[u32], k: u32) -> Vec<Rec> {
    let mut out: Vec<Rec> = primes
        .par_iter()
        .filter(|&&p| which.applies(p))
        .map(|&p| {
            let t = std::time::Instant::now();
            let r = PadicCtx::new(p as u64, k).and_then(|c| match which {
                Theorem6::Thm62 => padic::theorem62_record(&c),
                Theorem6::Thm63 => padic::theorem63_record(&c),
            });
            r.unwrap_or_else(|e| {
                Rec::exact_with(p as u64, "thm6-error", e.to_string(), "ok", false)
            })
            .with_elapsed(t.elapsed())
        })
        .collect();
    sort_records(&mut out);
    out
}
