//! Result emission: CSV and JSON renderings of aggregated blocking
//! rows, per-run details and per-episode series. The first two CSV
//! columns are always `erlang,blocking` so downstream plot scripts can
//! rely on them; numbers carry at most 10 significant digits.

use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;

/// One aggregated point of the blocking-vs-load curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub erlang: f64,
    pub blocking: f64,
    pub algorithm: String,
    pub seed_count: usize,
    pub cores: usize,
    pub max_segments: usize,
}

/// One (load, seed) run before aggregation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDetailRow {
    pub erlang: f64,
    pub blocking: f64,
    pub algorithm: String,
    pub seed_index: usize,
    pub seed: u64,
    pub episodes: usize,
    pub total_requests: usize,
    pub blocked: usize,
    pub no_route: usize,
    pub no_spectrum: usize,
    pub xt_threshold: usize,
}

/// One point of a blocking-vs-episode series (seed-averaged).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRow {
    pub erlang: f64,
    pub blocking: f64,
    pub algorithm: String,
    pub seed_count: usize,
    pub episode: usize,
}

/// Render a number with at most 10 significant digits, `.` separator,
/// no exponent. Rounding goes through a scientific intermediate so the
/// shortest decimal below the digit budget wins.
pub fn format_number(x: f64) -> String {
    debug_assert!(x.is_finite());
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("scientific round-trip");
    format!("{rounded}")
}

/// A row type that knows its CSV header and field rendering.
pub trait CsvRecord {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

impl CsvRecord for ResultRow {
    const HEADER: &'static str = "erlang,blocking,algorithm,seed_count,cores,max_segments";
    fn fields(&self) -> Vec<String> {
        vec![
            format_number(self.erlang),
            format_number(self.blocking),
            self.algorithm.clone(),
            self.seed_count.to_string(),
            self.cores.to_string(),
            self.max_segments.to_string(),
        ]
    }
}

impl CsvRecord for RunDetailRow {
    const HEADER: &'static str = "erlang,blocking,algorithm,seed_index,seed,episodes,\
                                  total_requests,blocked,no_route,no_spectrum,xt_threshold";
    fn fields(&self) -> Vec<String> {
        vec![
            format_number(self.erlang),
            format_number(self.blocking),
            self.algorithm.clone(),
            self.seed_index.to_string(),
            self.seed.to_string(),
            self.episodes.to_string(),
            self.total_requests.to_string(),
            self.blocked.to_string(),
            self.no_route.to_string(),
            self.no_spectrum.to_string(),
            self.xt_threshold.to_string(),
        ]
    }
}

impl CsvRecord for EpisodeRow {
    const HEADER: &'static str = "erlang,blocking,algorithm,seed_count,episode";
    fn fields(&self) -> Vec<String> {
        vec![
            format_number(self.erlang),
            format_number(self.blocking),
            self.algorithm.clone(),
            self.seed_count.to_string(),
            self.episode.to_string(),
        ]
    }
}

/// CSV text for a row slice: header line plus one line per row, joined
/// with plain `\n`. Empty input yields a header-only file.
pub fn to_csv<T: CsvRecord>(rows: &[T]) -> String {
    let mut out = String::from(T::HEADER);
    out.push('\n');
    for row in rows {
        let fields = row.fields();
        debug_assert!(
            fields.iter().all(|f| !f.contains(',') && !f.contains('\n')),
            "fields must not need quoting"
        );
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// JSON text mirroring the same rows.
pub fn to_json<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

/// Write one logical table under `dir` in the requested formats;
/// returns the created paths in format order.
pub fn write_table<T: CsvRecord + Serialize>(
    rows: &[T],
    dir: &Path,
    stem: &str,
    formats: &[OutputFormat],
) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for format in formats {
        let (ext, text) = match format {
            OutputFormat::Csv => ("csv", to_csv(rows)),
            OutputFormat::Json => ("json", to_json(rows)),
        };
        let path = dir.join(format!("{stem}.{ext}"));
        std::fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

/// Write the aggregated blocking-vs-load table (`results.*`).
pub fn write_results(
    rows: &[ResultRow],
    dir: &Path,
    formats: &[OutputFormat],
) -> io::Result<Vec<PathBuf>> {
    write_table(rows, dir, "results", formats)
}
