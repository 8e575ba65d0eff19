//! On-disk formats. JSON artifacts mirror the schemas under `schemas/`;
//! CSV artifacts carry a header row with the column names listed here.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use symprop_core::fano::LemmaReport;
use symprop_core::packing::SignVector;
use symprop_core::{DiscreteDistribution, PackingInstance, Profile, RiskReport, SampleBatch};

use crate::error::{CliError, Result};

/// Version of every artifact schema written by this crate.
pub const ARTIFACT_SCHEMA_VERSION: u32 = 1;

pub const RISK_COLUMNS: [&str; 10] = ["experiment", "estimator", "n", "k", "delta", "M", "value", "stderr", "seed", "method"];

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parses a JSON array of probabilities.
pub fn parse_distribution(text: &str) -> Result<DiscreteDistribution> {
    let probs: Vec<f64> = serde_json::from_str(text.trim()).map_err(|e| CliError::config(format!("distribution: {e}")))?;
    Ok(DiscreteDistribution::new(probs)?)
}

/// Parses a JSON array `[φ_0, φ_1, …, φ_n]`.
pub fn parse_profile(text: &str, k: Option<usize>) -> Result<Profile> {
    let counts: Vec<u64> = serde_json::from_str(text.trim()).map_err(|e| CliError::config(format!("profile: {e}")))?;
    Ok(match k {
        Some(k) => Profile::with_k(counts, k)?,
        None => Profile::new(counts)?,
    })
}

/// Reads a single-column CSV of 1-based symbol indices, header `symbol`.
/// Without `k`, the largest index seen is used.
pub fn read_samples(path: &Path, k: Option<usize>) -> Result<SampleBatch> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != 1 || &headers[0] != "symbol" {
        return Err(CliError::config(format!("{}: expected a single `symbol` column", path.display())));
    }
    let mut draws = Vec::new();
    for record in reader.deserialize::<(u32,)>() {
        let (symbol,) = record?;
        if symbol == 0 {
            return Err(CliError::config("sample symbols are 1-based"));
        }
        draws.push(symbol);
    }
    let k = k.unwrap_or_else(|| draws.iter().max().map_or(1, |&m| m as usize));
    Ok(SampleBatch::new(draws, k, 0)?)
}

pub fn samples_csv(batch: &SampleBatch) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["symbol"])?;
    for &d in batch.draws() {
        w.write_record([d.to_string()])?;
    }
    finish_csv(w)
}

pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::io("<memory>", e.into_error()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub n: u64,
    pub k: usize,
    pub counts: Vec<u64>,
}

impl From<&Profile> for ProfileJson {
    fn from(p: &Profile) -> Self {
        ProfileJson { n: p.n(), k: p.k(), counts: p.counts().to_vec() }
    }
}

impl ProfileJson {
    pub fn to_profile(&self) -> Result<Profile> {
        let p = Profile::with_k(self.counts.clone(), self.k)?;
        if p.n() != self.n {
            return Err(CliError::config(format!("profile n = {} but counts give {}", self.n, p.n())));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingJson {
    pub schema_version: u32,
    pub k: usize,
    pub k0: usize,
    pub delta: f64,
    /// Informational; readers regenerate `p0` from `k`.
    pub p0: Vec<f64>,
    pub interval_halfwidth: f64,
    pub min_hamming: u32,
    /// One bit per coordinate, `1` meaning `−1`, coordinate 0 first.
    pub codewords: Vec<String>,
}

impl From<&PackingInstance> for PackingJson {
    fn from(p: &PackingInstance) -> Self {
        PackingJson {
            schema_version: ARTIFACT_SCHEMA_VERSION,
            k: p.k(),
            k0: p.k0(),
            delta: p.delta(),
            p0: p.p0().probs().to_vec(),
            interval_halfwidth: p.interval_halfwidth(),
            min_hamming: p.min_hamming(),
            codewords: p.codewords().iter().map(SignVector::to_bit_string).collect(),
        }
    }
}

impl PackingJson {
    pub fn to_packing(&self) -> Result<PackingInstance> {
        let words = self.codewords.iter().map(|s| SignVector::parse_bit_string(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(PackingInstance::from_codewords(self.k, self.delta, words)?)
    }
}

/// The lemma report; the first six fields are the published core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaJson {
    pub p_min: f64,
    pub mi: f64,
    pub delta: f64,
    pub lhs_risk: f64,
    pub fano_bound: f64,
    pub satisfied: bool,
    pub schema_version: u32,
    pub applicable: bool,
    pub mi_is_bound: bool,
    pub delta_grid: Option<f64>,
    pub delta_realized: Option<f64>,
    pub lhs_stderr: f64,
    pub method: String,
    pub estimator: String,
    #[serde(rename = "M")]
    pub m: usize,
    pub n: u64,
    pub k: usize,
    pub seed: u64,
}

impl LemmaJson {
    pub fn new(r: &LemmaReport, estimator: String) -> Self {
        LemmaJson {
            p_min: r.p_min,
            mi: r.mi,
            delta: r.delta,
            lhs_risk: r.lhs_risk,
            fano_bound: r.fano_bound,
            satisfied: r.satisfied,
            schema_version: ARTIFACT_SCHEMA_VERSION,
            applicable: r.applicable,
            mi_is_bound: r.mi_is_bound,
            delta_grid: r.delta_grid,
            delta_realized: r.delta_realized,
            lhs_stderr: r.lhs_stderr,
            method: r.method.tag().into(),
            estimator,
            m: r.m,
            n: r.n,
            k: r.k,
            seed: r.seed,
        }
    }
}

/// One row of `risk.csv` / `risk.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub experiment: String,
    pub estimator: String,
    pub n: u64,
    pub k: usize,
    pub delta: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub value: f64,
    pub stderr: f64,
    pub seed: u64,
    pub method: String,
}

impl RiskRow {
    pub fn from_report(experiment: impl Into<String>, estimator: &str, r: &RiskReport, delta: Option<f64>, m: Option<usize>) -> Self {
        RiskRow {
            experiment: experiment.into(),
            estimator: estimator.into(),
            n: r.n,
            k: r.k,
            delta,
            m,
            value: r.value,
            stderr: r.stderr,
            seed: r.seed,
            method: r.method.tag().into(),
        }
    }
}

#[derive(Serialize)]
struct RiskLine<'a> {
    schema_version: u32,
    #[serde(flatten)]
    row: &'a RiskRow,
}

pub fn risk_csv(rows: &[RiskRow]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(RISK_COLUMNS)?;
    for r in rows {
        w.serialize(r)?;
    }
    finish_csv(w)
}

pub fn risk_jsonl(rows: &[RiskRow]) -> Result<Vec<u8>> {
    jsonl(rows.iter().map(|row| RiskLine { schema_version: ARTIFACT_SCHEMA_VERSION, row }))
}

pub fn jsonl<T: Serialize>(items: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, &item)?;
        out.push(b'\n');
    }
    Ok(out)
}

pub fn json_pretty<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.write_all(b"\n").expect("write to Vec");
    Ok(out)
}

/// Serializes plain records as CSV with a header from the field names.
pub fn records_csv<T: Serialize>(records: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    finish_csv(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_round_trip() {
        let batch = SampleBatch::new(vec![1, 3, 2, 3], 3, 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        fs::write(&path, samples_csv(&batch).unwrap()).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "symbol\n1\n3\n2\n3\n");
        let back = read_samples(&path, None).unwrap();
        assert_eq!(back.draws(), batch.draws());
        assert_eq!(back.k(), 3);
        assert_eq!(read_samples(&path, Some(5)).unwrap().k(), 5);
        fs::write(&path, "symbol\n0\n").unwrap();
        assert!(read_samples(&path, None).is_err());
    }

    #[test]
    fn packing_round_trip() {
        let p = PackingInstance::new(8, 0.001).unwrap();
        let json = PackingJson::from(&p);
        let back: PackingJson = serde_json::from_slice(&json_pretty(&json).unwrap()).unwrap();
        let q = back.to_packing().unwrap();
        assert_eq!(q.codewords(), p.codewords());
        assert_eq!(q.p0(), p.p0());
    }

    #[test]
    fn profile_json_checks_n() {
        let p = ProfileJson { n: 2, k: 2, counts: vec![0, 2, 0] };
        assert_eq!(p.to_profile().unwrap().n(), 2);
        assert!(ProfileJson { n: 3, ..p }.to_profile().is_err());
    }

    #[test]
    fn risk_csv_header_and_empty_fields() {
        let row = RiskRow {
            experiment: "x".into(),
            estimator: "empirical".into(),
            n: 2,
            k: 2,
            delta: None,
            m: None,
            value: 0.5,
            stderr: 0.0,
            seed: 1,
            method: "exact_enum".into(),
        };
        let text = String::from_utf8(risk_csv(&[row.clone()]).unwrap()).unwrap();
        assert_eq!(text, "experiment,estimator,n,k,delta,M,value,stderr,seed,method\nx,empirical,2,2,,,0.5,0.0,1,exact_enum\n");
        let line = String::from_utf8(risk_jsonl(&[row]).unwrap()).unwrap();
        assert!(line.starts_with("{\"schema_version\":1,\"experiment\":\"x\""));
    }
}
