//! Flat report rows and their CSV / JSON encodings.
//!
//! CSV output starts with a `#` comment line carrying the run metadata,
//! followed by the header row and one line per pair. JSON output is an object
//! with `meta`, `rows` and `summary`. Neither format carries a timestamp, so
//! a fixed run configuration always produces identical bytes. Line endings
//! are LF.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::pipeline::{verify_pair_within, PairVerdict};
use crate::residue::OddPrime;
use crate::suites::odd_primes_up_to;
use crate::{Error, Result};

pub const TOOL_NAME: &str = "recipro";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column order of the CSV header.
pub const CSV_COLUMNS: [&str; 14] = [
    "p", "q", "p_mod4", "q_mod4", "rank", "prodL_p", "prodL_q", "closed_p", "closed_q", "leg_qp",
    "leg_pq", "relation", "qr_holds", "all_pass",
];

/// One verified pair, flattened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: u64,
    pub q: u64,
    pub p_mod4: u64,
    pub q_mod4: u64,
    pub rank: u32,
    #[serde(rename = "prodL_p")]
    pub prod_l_p: u64,
    #[serde(rename = "prodL_q")]
    pub prod_l_q: u64,
    pub closed_p: u64,
    pub closed_q: u64,
    pub leg_qp: i8,
    pub leg_pq: i8,
    /// `equal` or `opposite`.
    pub relation: String,
    pub qr_holds: bool,
    pub all_pass: bool,
}

impl From<&PairVerdict> for SweepRow {
    fn from(v: &PairVerdict) -> Self {
        SweepRow {
            p: v.p.get(),
            q: v.q.get(),
            p_mod4: v.p.mod4(),
            q_mod4: v.q.mod4(),
            rank: v.rank,
            prod_l_p: v.product_l.a(),
            prod_l_q: v.product_l.b(),
            closed_p: v.closed_form.a(),
            closed_q: v.closed_form.b(),
            leg_qp: v.legendre_qp.as_i8(),
            leg_pq: v.legendre_pq.as_i8(),
            relation: v.predicted_relation.as_str().to_owned(),
            qr_holds: v.qr_identity_holds,
            all_pass: v.all_pass(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::domain(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// What was run, recorded in every report header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub bounds: BTreeMap<String, u64>,
}

impl RunMeta {
    pub fn new(
        command: &str,
        seed: u64,
        bounds: impl IntoIterator<Item = (&'static str, u64)>,
    ) -> Self {
        RunMeta {
            tool: TOOL_NAME.to_owned(),
            version: VERSION.to_owned(),
            command: command.to_owned(),
            seed,
            bounds: bounds.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        }
    }

    fn csv_comment(&self) -> String {
        let mut line = format!(
            "# {} {} command={} seed={}",
            self.tool, self.version, self.command, self.seed
        );
        for (k, v) in &self.bounds {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pairs: u64,
    pub failures: u64,
}

impl Summary {
    pub fn of(rows: &[SweepRow]) -> Self {
        Summary {
            pairs: rows.len() as u64,
            failures: rows.iter().filter(|r| !r.all_pass).count() as u64,
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs == 0 {
            write!(f, "no pairs")
        } else {
            write!(f, "{} pairs, {} failures", self.pairs, self.failures)
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    meta: &'a RunMeta,
    rows: &'a [SweepRow],
    summary: Summary,
}

pub fn render(rows: &[SweepRow], meta: &RunMeta, format: Format) -> Result<String> {
    match format {
        Format::Csv => render_csv(rows, meta),
        Format::Json => render_json(rows, meta),
    }
}

fn render_csv(rows: &[SweepRow], meta: &RunMeta) -> Result<String> {
    let mut out = meta.csv_comment();
    out.push('\n');
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Internal(format!("csv encoding failed: {e}"));
    writer.write_record(CSV_COLUMNS).map_err(io_err)?;
    for row in rows {
        writer.serialize(row).map_err(io_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv encoding failed: {e}")))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
    Ok(out)
}

fn render_json(rows: &[SweepRow], meta: &RunMeta) -> Result<String> {
    let report = JsonReport {
        meta,
        rows,
        summary: Summary::of(rows),
    };
    let mut out = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Internal(format!("json encoding failed: {e}")))?;
    out.push('\n');
    Ok(out)
}

/// Reads the rows back from a CSV report, skipping the comment line.
pub fn parse_csv_rows(text: &str) -> Result<Vec<SweepRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<SweepRow>, _>>()
        .map_err(|e| Error::Domain(format!("malformed csv report: {e}")))
}

/// Reads the rows back from a JSON report.
pub fn parse_json_rows(text: &str) -> Result<Vec<SweepRow>> {
    #[derive(Deserialize)]
    struct Rows {
        rows: Vec<SweepRow>,
    }
    serde_json::from_str::<Rows>(text)
        .map(|r| r.rows)
        .map_err(|e| Error::Domain(format!("malformed json report: {e}")))
}

/// All pairs of odd primes `p < q <= max`, in `(p, q)` order.
pub fn sweep_pairs(max: u64) -> Vec<(OddPrime, OddPrime)> {
    let primes: Vec<OddPrime> = odd_primes_up_to(max)
        .into_iter()
        .map(|p| OddPrime::new(p).expect("listed primes are odd primes"))
        .collect();
    let mut pairs = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            pairs.push((p, q));
        }
    }
    pairs
}

/// Verifies every pair `p < q <= max`. Pairs run in parallel; the result is
/// in `(p, q)` order.
pub fn sweep(max: u64, budget: &Budget) -> Result<Vec<PairVerdict>> {
    let pairs = sweep_pairs(max);
    if let Some(&(p, q)) = pairs
        .iter()
        .max_by_key(|(p, q)| p.get() as u128 * q.get() as u128)
    {
        let pq = p.get() as u128 * q.get() as u128;
        if pq > budget.pipeline_pq as u128 {
            return Err(Error::capacity(
                "largest p * q in the sweep",
                pq,
                budget.pipeline_pq,
            ));
        }
    }
    pairs
        .par_iter()
        .map(|&(p, q)| verify_pair_within(p, q, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::verify_pair;

    fn prime(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn row(p: u64, q: u64) -> SweepRow {
        SweepRow::from(&verify_pair(prime(p), prime(q)).unwrap())
    }

    #[test]
    fn row_3_5() {
        let r = row(3, 5);
        assert_eq!(
            r,
            SweepRow {
                p: 3,
                q: 5,
                p_mod4: 3,
                q_mod4: 1,
                rank: 1,
                prod_l_p: 2,
                prod_l_q: 1,
                closed_p: 2,
                closed_q: 1,
                leg_qp: -1,
                leg_pq: -1,
                relation: "equal".into(),
                qr_holds: true,
                all_pass: true,
            }
        );
    }

    #[test]
    fn csv_golden() {
        let meta = RunMeta::new("verify", 0, [("p", 3), ("q", 7)]);
        let text = render(&[row(3, 7)], &meta, Format::Csv).unwrap();
        let expected = "# recipro ".to_owned()
            + VERSION
            + " command=verify seed=0 p=3 q=7\n\
               p,q,p_mod4,q_mod4,rank,prodL_p,prodL_q,closed_p,closed_q,leg_qp,leg_pq,relation,qr_holds,all_pass\n\
               3,7,3,3,1,2,1,2,1,1,-1,opposite,true,true\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn json_shape() {
        let meta = RunMeta::new("sweep", 9, [("max", 7)]);
        let rows = vec![row(3, 5), row(3, 7), row(5, 7)];
        let text = render(&rows, &meta, Format::Json).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["meta"]["seed"], 9);
        assert_eq!(value["meta"]["bounds"]["max"], 7);
        assert_eq!(value["summary"]["pairs"], 3);
        assert_eq!(value["rows"][1]["leg_pq"], -1);
        assert_eq!(value["rows"][1]["prodL_p"], 2);
        assert!(text.ends_with("}\n") && !text.contains('\r'));
    }

    #[test]
    fn formats_carry_identical_rows() {
        let meta = RunMeta::new("sweep", 1, [("max", 30)]);
        let rows: Vec<SweepRow> = sweep(30, &Budget::default())
            .unwrap()
            .iter()
            .map(SweepRow::from)
            .collect();
        let csv = render(&rows, &meta, Format::Csv).unwrap();
        let json = render(&rows, &meta, Format::Json).unwrap();
        assert_eq!(parse_csv_rows(&csv).unwrap(), rows);
        assert_eq!(parse_json_rows(&json).unwrap(), rows);
    }

    #[test]
    fn sweep_counts_and_order() {
        let verdicts = sweep(20, &Budget::default()).unwrap();
        assert_eq!(verdicts.len(), 21);
        let keys: Vec<_> = verdicts.iter().map(|v| (v.p, v.q)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(verdicts.iter().all(|v| v.all_pass()));
        assert!(sweep(3, &Budget::default()).unwrap().is_empty());
        assert_eq!(Summary::of(&[]).to_string(), "no pairs");
    }

    #[test]
    fn sweep_honours_budget() {
        let budget = Budget::default().lowered_to(200);
        assert!(matches!(sweep(20, &budget), Err(Error::Capacity { .. })));
        assert_eq!(sweep(13, &budget).unwrap().len(), 10);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
