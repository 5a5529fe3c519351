//! Verification records and their CSV/JSON emission.

use crate::cache::SCHEMA_LINE;
use crate::error::Result;
use serde::Serialize;
use std::fmt::Display;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    /// lhs = rhs is asserted; a mismatch fails the run.
    Exact,
    /// Bounded-ratio record; `matched` means ratio ≤ threshold.
    Ratio,
    /// Informational; never fails a run.
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub p: u64,
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(rename = "match")]
    pub matched: bool,
    pub ratio: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub kind: RecordKind,
}

impl VerificationRecord {
    pub fn exact<L: Display + PartialEq<R>, R: Display>(
        p: u64,
        name: &str,
        lhs: L,
        rhs: R,
    ) -> Self {
        let matched = lhs == rhs;
        Self::build(
            p,
            name,
            lhs.to_string(),
            rhs.to_string(),
            matched,
            None,
            RecordKind::Exact,
        )
    }

    /// Exact record whose match is decided by the caller (e.g. congruence mod p^K).
    pub fn exact_with(
        p: u64,
        name: &str,
        lhs: impl Display,
        rhs: impl Display,
        matched: bool,
    ) -> Self {
        Self::build(
            p,
            name,
            lhs.to_string(),
            rhs.to_string(),
            matched,
            None,
            RecordKind::Exact,
        )
    }

    pub fn ratio(p: u64, name: &str, quantity: impl Display, ratio: f64, threshold: f64) -> Self {
        Self::build(
            p,
            name,
            quantity.to_string(),
            format!("<= {threshold}"),
            ratio <= threshold,
            Some(ratio),
            RecordKind::Ratio,
        )
    }

    pub fn report(p: u64, name: &str, lhs: impl Display, rhs: impl Display, matched: bool) -> Self {
        Self::build(
            p,
            name,
            lhs.to_string(),
            rhs.to_string(),
            matched,
            None,
            RecordKind::Report,
        )
    }

    fn build(
        p: u64,
        name: &str,
        lhs: String,
        rhs: String,
        matched: bool,
        ratio: Option<f64>,
        kind: RecordKind,
    ) -> Self {
        VerificationRecord {
            p,
            name: name.to_string(),
            lhs,
            rhs,
            matched,
            ratio,
            elapsed: Duration::ZERO,
            kind,
        }
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = Some(ratio);
        self
    }

    pub fn with_elapsed(mut self, d: Duration) -> Self {
        self.elapsed = d;
        self
    }

    /// True for exact records that do not match.
    pub fn is_failure(&self) -> bool {
        self.kind == RecordKind::Exact && !self.matched
    }
}

/// Time `f` and stamp the elapsed duration on every record it returns.
pub fn timed<F: FnOnce() -> Vec<VerificationRecord>>(f: F) -> Vec<VerificationRecord> {
    let t = std::time::Instant::now();
    let mut v = f();
    let d = t.elapsed();
    for r in &mut v {
        r.elapsed = d;
    }
    v
}

pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| (a.p, &a.name).cmp(&(b.p, &b.name)));
}

/// `p,name,lhs,rhs,match,ratio,elapsed_ms`; elapsed_ms is left empty unless
/// `timings` is set so that output stays byte-identical between runs.
pub fn to_csv(records: &[VerificationRecord], timings: bool) -> Result<String> {
    let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["p", "name", "lhs", "rhs", "match", "ratio", "elapsed_ms"])?;
        for r in records {
            let ratio = r.ratio.map(|x| format!("{x:.6}")).unwrap_or_default();
            let ms = if timings {
                format!("{:.3}", r.elapsed.as_secs_f64() * 1e3)
            } else {
                String::new()
            };
            w.write_record([
                r.p.to_string(),
                r.name.clone(),
                r.lhs.clone(),
                r.rhs.clone(),
                r.matched.to_string(),
                ratio,
                ms,
            ])?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(out).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    #[serde(flatten)]
    rec: &'a VerificationRecord,
    elapsed_ms: Option<f64>,
}

pub fn to_json(records: &[VerificationRecord], timings: bool) -> String {
    let rows: Vec<_> = records
        .iter()
        .map(|rec| JsonRecord {
            rec,
            elapsed_ms: timings.then_some(rec.elapsed.as_secs_f64() * 1e3),
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("records serialize")
}
