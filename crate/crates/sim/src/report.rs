//! Distribution summaries and the CSV files downstream plotting reads.
//!
//! Both files are UTF-8 with a header row and LF line endings. Floats are
//! written in their shortest round-trip form, so parsing a file back yields
//! bit-identical values and reruns produce byte-identical files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use abroca_core::numerics::{summarize, SummaryStats};
use abroca_core::{Composition, Error, PopulationSpec, ReplicationResult, SimConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Sampling distribution of ABROCA (and of the signed AUC gap) for one config.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSummary {
    pub config_id: String,
    pub spec: PopulationSpec,
    pub n_test: usize,
    pub abroca: SummaryStats,
    /// Statistics of `auc_group1 - auc_group2`.
    pub auc_diff: SummaryStats,
    pub mean_resamples: f64,
    pub nonconverged_frac: f64,
}

pub fn summarize_config(
    config: &SimConfig,
    results: &[ReplicationResult],
) -> Result<DistributionSummary> {
    summarize_parts(
        &config.config_id,
        config.spec,
        results.iter().map(|r| {
            (
                r.abroca,
                r.auc_group1 - r.auc_group2,
                r.converged,
                r.resample_count,
            )
        }),
    )
}

fn summarize_parts(
    config_id: &str,
    spec: PopulationSpec,
    parts: impl Iterator<Item = (f64, f64, bool, u32)>,
) -> Result<DistributionSummary> {
    let mut abroca = Vec::new();
    let mut diff = Vec::new();
    let mut nonconverged = 0usize;
    let mut resamples = 0u64;
    for (a, d, converged, r) in parts {
        abroca.push(a);
        diff.push(d);
        nonconverged += usize::from(!converged);
        resamples += u64::from(r);
    }
    if abroca.is_empty() {
        return Err(Error::Domain {
            what: "summarize_config",
            detail: format!("`{config_id}` has no replication results"),
        }
        .into());
    }
    let n = abroca.len() as f64;
    Ok(DistributionSummary {
        config_id: config_id.to_owned(),
        spec,
        n_test: spec.n_test(),
        abroca: summarize(&abroca)?,
        auc_diff: summarize(&diff)?,
        mean_resamples: resamples as f64 / n,
        nonconverged_frac: nonconverged as f64 / n,
    })
}

/// One line of the replications CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub config_id: String,
    pub n_total: usize,
    pub n_test: usize,
    pub auc_major: f64,
    pub auc_minor: f64,
    pub minority_ratio: f64,
    pub positive_ratio: f64,
    pub replication_index: u64,
    pub abroca: f64,
    pub auc_group1: f64,
    pub auc_group2: f64,
    pub converged: bool,
    pub resample_count: u32,
}

impl ReplicationRow {
    pub fn new(config: &SimConfig, r: &ReplicationResult) -> Self {
        let s = &config.spec;
        Self {
            config_id: r.config_id.clone(),
            n_total: s.n_total,
            n_test: s.n_test(),
            auc_major: s.auc_major,
            auc_minor: s.auc_minor,
            minority_ratio: s.minority_ratio,
            positive_ratio: s.positive_ratio,
            replication_index: r.replication_index,
            abroca: r.abroca,
            auc_group1: r.auc_group1,
            auc_group2: r.auc_group2,
            converged: r.converged,
            resample_count: r.resample_count,
        }
    }

    fn spec(&self) -> PopulationSpec {
        PopulationSpec {
            auc_major: self.auc_major,
            auc_minor: self.auc_minor,
            minority_ratio: self.minority_ratio,
            positive_ratio: self.positive_ratio,
            n_total: self.n_total,
            composition: Composition::Exact,
        }
    }
}

/// One line of the summaries CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub config_id: String,
    pub n_total: usize,
    pub n_test: usize,
    pub auc_major: f64,
    pub auc_minor: f64,
    pub minority_ratio: f64,
    pub positive_ratio: f64,
    pub reps: usize,
    pub abroca_median: f64,
    pub abroca_mean: f64,
    pub abroca_q025: f64,
    pub abroca_q975: f64,
    pub abroca_skew_mm: f64,
    pub aucdiff_median: f64,
    pub aucdiff_q025: f64,
    pub aucdiff_q975: f64,
    pub nonconverged_frac: f64,
    pub mean_resamples: f64,
}

impl From<&DistributionSummary> for SummaryRow {
    fn from(s: &DistributionSummary) -> Self {
        Self {
            config_id: s.config_id.clone(),
            n_total: s.spec.n_total,
            n_test: s.n_test,
            auc_major: s.spec.auc_major,
            auc_minor: s.spec.auc_minor,
            minority_ratio: s.spec.minority_ratio,
            positive_ratio: s.spec.positive_ratio,
            reps: s.abroca.n,
            abroca_median: s.abroca.median,
            abroca_mean: s.abroca.mean,
            abroca_q025: s.abroca.q025,
            abroca_q975: s.abroca.q975,
            abroca_skew_mm: s.abroca.skew_mm,
            aucdiff_median: s.auc_diff.median,
            aucdiff_q025: s.auc_diff.q025,
            aucdiff_q975: s.auc_diff.q975,
            nonconverged_frac: s.nonconverged_frac,
            mean_resamples: s.mean_resamples,
        }
    }
}

/// Incremental CSV writer; rows go out in the order they are given.
pub struct CsvSink<R> {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
    rows: usize,
    _row: std::marker::PhantomData<R>,
}

impl<R: Serialize> CsvSink<R> {
    pub fn create(path: impl AsRef<Path>, header: &[&str]) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| SimError::io(&path, e))?;
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(BufWriter::new(file));
        // written by hand so an empty file still carries its header
        writer
            .write_record(header)
            .map_err(|e| SimError::csv(&path, e))?;
        Ok(Self {
            path,
            writer,
            rows: 0,
            _row: std::marker::PhantomData,
        })
    }

    pub fn write(&mut self, row: &R) -> Result<()> {
        self.writer
            .serialize(row)
            .map_err(|e| SimError::csv(&self.path, e))?;
        self.rows += 1;
        Ok(())
    }

    /// Flushes and returns the number of data rows written.
    pub fn finish(mut self) -> Result<usize> {
        self.writer
            .flush()
            .map_err(|e| SimError::io(&self.path, e))?;
        let inner = self
            .writer
            .into_inner()
            .map_err(|e| SimError::io(&self.path, e.into_error()))?;
        inner
            .into_inner()
            .map_err(|e| SimError::io(&self.path, e.into_error()))?
            .sync_all()
            .map_err(|e| SimError::io(&self.path, e))?;
        Ok(self.rows)
    }
}

pub const REPLICATION_COLUMNS: [&str; 13] = [
    "config_id",
    "n_total",
    "n_test",
    "auc_major",
    "auc_minor",
    "minority_ratio",
    "positive_ratio",
    "replication_index",
    "abroca",
    "auc_group1",
    "auc_group2",
    "converged",
    "resample_count",
];

pub const SUMMARY_COLUMNS: [&str; 18] = [
    "config_id",
    "n_total",
    "n_test",
    "auc_major",
    "auc_minor",
    "minority_ratio",
    "positive_ratio",
    "reps",
    "abroca_median",
    "abroca_mean",
    "abroca_q025",
    "abroca_q975",
    "abroca_skew_mm",
    "aucdiff_median",
    "aucdiff_q025",
    "aucdiff_q975",
    "nonconverged_frac",
    "mean_resamples",
];

pub type ReplicationSink = CsvSink<ReplicationRow>;
pub type SummarySink = CsvSink<SummaryRow>;

impl ReplicationSink {
    pub fn replications(path: impl AsRef<Path>) -> Result<Self> {
        Self::create(path, &REPLICATION_COLUMNS)
    }
}

impl SummarySink {
    pub fn summaries(path: impl AsRef<Path>) -> Result<Self> {
        Self::create(path, &SUMMARY_COLUMNS)
    }
}

/// Writes every replication, sorted by `(config_id, replication_index)`.
/// Returns the number of data rows.
pub fn write_replications(
    batches: &[(&SimConfig, &[ReplicationResult])],
    path: impl AsRef<Path>,
) -> Result<usize> {
    let mut rows: Vec<ReplicationRow> = batches
        .iter()
        .flat_map(|(c, rs)| rs.iter().map(move |r| ReplicationRow::new(c, r)))
        .collect();
    rows.sort_by(|a, b| {
        (&a.config_id, a.replication_index).cmp(&(&b.config_id, b.replication_index))
    });
    let mut sink = ReplicationSink::replications(path)?;
    for row in &rows {
        sink.write(row)?;
    }
    sink.finish()
}

/// Writes one row per summary, sorted by `config_id`.
pub fn write_summaries(summaries: &[DistributionSummary], path: impl AsRef<Path>) -> Result<usize> {
    let mut rows: Vec<SummaryRow> = summaries.iter().map(SummaryRow::from).collect();
    rows.sort_by(|a, b| a.config_id.cmp(&b.config_id));
    let mut sink = SummarySink::summaries(path)?;
    for row in &rows {
        sink.write(row)?;
    }
    sink.finish()
}

fn read_rows<R: for<'de> Deserialize<'de>>(path: &Path, columns: &[&str]) -> Result<Vec<R>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| SimError::csv(path, e))?;
    let header = reader.headers().map_err(|e| SimError::csv(path, e))?;
    if header.iter().ne(columns.iter().copied()) {
        return Err(SimError::Config(format!(
            "{}: unexpected header `{}`",
            path.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<R>, _>>()
        .map_err(|e| SimError::csv(path, e))
}

pub fn read_replications(path: impl AsRef<Path>) -> Result<Vec<ReplicationRow>> {
    read_rows(path.as_ref(), &REPLICATION_COLUMNS)
}

pub fn read_summaries(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    read_rows(path.as_ref(), &SUMMARY_COLUMNS)
}

/// Recomputes per-config summaries from replication rows, ordered by `config_id`.
pub fn summaries_from_rows(rows: &[ReplicationRow]) -> Result<Vec<DistributionSummary>> {
    let mut by_config: BTreeMap<&str, Vec<&ReplicationRow>> = BTreeMap::new();
    for row in rows {
        by_config.entry(&row.config_id).or_default().push(row);
    }
    by_config
        .into_iter()
        .map(|(id, rows)| {
            summarize_parts(
                id,
                rows[0].spec(),
                rows.iter().map(|r| {
                    (
                        r.abroca,
                        r.auc_group1 - r.auc_group2,
                        r.converged,
                        r.resample_count,
                    )
                }),
            )
        })
        .collect()
}
