//! Experiment reports and their CSV/JSON encodings.
//!
//! CSV columns are fixed:
//!
//! ```text
//! command,n,h,auction,n_h,opt,revenue,loss,normalized_loss,seed,samples,mean,stderr,gap_exact_num,gap_exact_den
//! ```
//!
//! Exact values are written as integers, `num/den` rationals or surd
//! expressions such as `100 - 89/11*sqrt(11)`. In JSON, rationals become
//! `{"num", "den", "decimal"}` objects and surds `{"exact", "decimal"}`.

use std::io::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::Experiment;
use crate::analysis::{BlockViolation, DistributionDReport, DistributionIdentities, DopDemo};
use crate::surd::Surd;

pub const CSV_COLUMNS: [&str; 15] = [
    "command",
    "n",
    "h",
    "auction",
    "n_h",
    "opt",
    "revenue",
    "loss",
    "normalized_loss",
    "seed",
    "samples",
    "mean",
    "stderr",
    "gap_exact_num",
    "gap_exact_den",
];

pub fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(3))?;
    map.serialize_entry("num", &q.numer().to_string())?;
    map.serialize_entry("den", &q.denom().to_string())?;
    map.serialize_entry("decimal", &q.to_f64())?;
    map.end()
}

pub fn serialize_surd<S: Serializer>(v: &Surd, s: S) -> Result<S::Ok, S::Error> {
    match v.to_rational() {
        Some(q) => serialize_rational(&q, s),
        None => {
            let mut map = s.serialize_map(Some(2))?;
            map.serialize_entry("exact", &v.to_string())?;
            map.serialize_entry("decimal", &v.to_f64())?;
            map.end()
        }
    }
}

fn serialize_opt_surd<S: Serializer>(v: &Option<Surd>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_surd(v, s),
        None => s.serialize_none(),
    }
}

fn serialize_opt_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(q) => serialize_rational(q, s),
        None => s.serialize_none(),
    }
}

/// One output line.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportRow {
    pub command: String,
    pub n: usize,
    pub h: u64,
    pub auction: Option<String>,
    pub n_h: Option<usize>,
    #[serde(serialize_with = "serialize_opt_surd")]
    pub opt: Option<Surd>,
    #[serde(serialize_with = "serialize_opt_surd")]
    pub revenue: Option<Surd>,
    #[serde(serialize_with = "serialize_opt_surd")]
    pub loss: Option<Surd>,
    pub normalized_loss: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub gap: Option<BigRational>,
}

impl ReportRow {
    fn csv_record(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(ToString::to_string).unwrap_or_default()
        }
        vec![
            self.command.clone(),
            self.n.to_string(),
            self.h.to_string(),
            opt(&self.auction),
            opt(&self.n_h),
            opt(&self.opt),
            opt(&self.revenue),
            opt(&self.loss),
            opt(&self.normalized_loss),
            opt(&self.seed),
            opt(&self.samples),
            opt(&self.mean),
            opt(&self.stderr),
            self.gap.as_ref().map(|q| q.numer().to_string()).unwrap_or_default(),
            self.gap.as_ref().map(|q| q.denom().to_string()).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NhLoss {
    pub n_h: usize,
    #[serde(serialize_with = "serialize_surd")]
    pub loss: Surd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepDetail {
    #[serde(serialize_with = "serialize_surd")]
    pub global_worst: Surd,
    pub normalized: f64,
    /// `H`/`L` string, bidder 1 first.
    pub witness: String,
    /// Loss of the witness, re-evaluated independently of the sweep.
    #[serde(serialize_with = "serialize_surd")]
    pub witness_loss: Surd,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lower_bound_gap: Option<BigRational>,
    pub per_nh_worst: Vec<NhLoss>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockCheckDetail {
    pub vectors_checked: u64,
    pub failing_vector: Option<String>,
    pub violation: Option<BlockViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationPoint {
    pub n_h: usize,
    #[serde(serialize_with = "serialize_surd")]
    pub expectation: Surd,
}

/// Structured result specific to each command.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detail {
    LossProfile(SweepDetail),
    DopDemo(DopDemo),
    DistributionD(DistributionIdentities),
    MonteCarlo(DistributionDReport),
    BlockCheck(BlockCheckDetail),
    Expectation { points: Vec<ExpectationPoint> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: Experiment,
    pub rows: Vec<ReportRow>,
    pub detail: Detail,
}

pub fn write_csv<'a>(mut out: impl Write, rows: impl IntoIterator<Item = &'a ReportRow>) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(&mut out);
    writer.write_record(CSV_COLUMNS)?;
    for row in rows {
        writer.write_record(row.csv_record())?;
    }
    writer.flush()
}

pub fn write_json<T: Serialize>(mut out: impl Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}
