//! Exhaustive classification of graph6 streams.
//!
//! Records are read in fixed-size chunks; each chunk is classified in
//! parallel and merged back in input order, so the summary does not depend on
//! the worker count.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon;
use crate::equivalence::Classifier;
use crate::error::{Error, Result};
use crate::graph6::{self, Record};

const CHUNK: usize = 1 << 14;

/// One irregular graph with at least one equivalent start vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub graph6: String,
    pub starts: Vec<usize>,
}

/// Counts for one vertex order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub n: usize,
    #[serde(rename = "total")]
    pub total_connected: usize,
    pub regular: usize,
    pub irregular: usize,
    #[serde(rename = "equivalent")]
    pub equivalent_irregular: usize,
    pub hits: Vec<Hit>,
    /// Tolerance-decided merges encountered (see
    /// [`crate::EquivalenceReport::suspicious_merges`]).
    pub suspicious_merges: usize,
    #[serde(rename = "elapsed_sec")]
    pub elapsed: f64,
}

impl ScanSummary {
    fn empty() -> Self {
        ScanSummary {
            n: 0,
            total_connected: 0,
            regular: 0,
            irregular: 0,
            equivalent_irregular: 0,
            hits: Vec::new(),
            suspicious_merges: 0,
            elapsed: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }

    /// JSON without the wall-clock field, for reproducibility comparisons.
    pub fn to_json_deterministic(&self) -> String {
        let mut value = serde_json::to_value(self).expect("summary serialises");
        if let Some(map) = value.as_object_mut() {
            map.remove("elapsed_sec");
        }
        serde_json::to_string_pretty(&value).expect("summary serialises")
    }
}

/// Plain-text table with one row per summary.
pub fn format_table(rows: &[ScanSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8}  {:>12}  {:>8}  {:>12}  {:>10}",
        "Vertices", "Connected", "Regular", "Irregular", "Equivalent"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8}  {:>12}  {:>8}  {:>12}  {:>10}",
            r.n, r.total_connected, r.regular, r.irregular, r.equivalent_irregular
        );
    }
    out
}

enum Outcome {
    Regular,
    Irregular {
        hit: Option<Vec<usize>>,
        merges: usize,
    },
}

fn classify_chunk(classifier: &Classifier, chunk: &[Record]) -> Result<Vec<Outcome>> {
    chunk
        .par_iter()
        .map(|rec| {
            if rec.graph.is_regular() {
                if !rec.graph.is_connected() {
                    return Err(Error::Line {
                        line: rec.line,
                        source: Box::new(Error::Disconnected),
                    });
                }
                return Ok(Outcome::Regular);
            }
            let (starts, merges) =
                classifier
                    .equivalent_starts(&rec.graph)
                    .map_err(|e| Error::Line {
                        line: rec.line,
                        source: Box::new(e),
                    })?;
            Ok(Outcome::Irregular {
                hit: (!starts.is_empty()).then_some(starts),
                merges,
            })
        })
        .collect()
}

/// Scans a graph6 stream with the given classifier on `workers` threads.
pub fn scan_with<R: BufRead>(
    source: R,
    workers: usize,
    classifier: &Classifier,
) -> Result<ScanSummary> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io {
            path: "<thread pool>".into(),
            message: e.to_string(),
        })?;

    let mut summary = ScanSummary::empty();
    let mut records = graph6::read_records(source);
    let mut chunk: Vec<Record> = Vec::with_capacity(CHUNK);
    loop {
        chunk.clear();
        for rec in records.by_ref().take(CHUNK) {
            let rec = rec?;
            if summary.total_connected == 0 && chunk.is_empty() {
                summary.n = rec.graph.n();
            } else if rec.graph.n() != summary.n {
                return Err(Error::MixedSizes {
                    expected: summary.n,
                    found: rec.graph.n(),
                    line: rec.line,
                });
            }
            chunk.push(rec);
        }
        if chunk.is_empty() {
            break;
        }
        let outcomes = pool.install(|| classify_chunk(classifier, &chunk))?;
        for (rec, outcome) in chunk.iter().zip(outcomes) {
            summary.total_connected += 1;
            match outcome {
                Outcome::Regular => summary.regular += 1,
                Outcome::Irregular { hit, merges } => {
                    summary.irregular += 1;
                    summary.suspicious_merges += merges;
                    if let Some(starts) = hit {
                        summary.hits.push(Hit {
                            graph6: rec.text.clone(),
                            starts,
                        });
                    }
                }
            }
        }
    }
    summary.equivalent_irregular = summary.hits.len();
    summary.elapsed = started.elapsed().as_secs_f64();
    Ok(summary)
}

/// Scans with default tolerances.
pub fn scan_stream<R: BufRead>(source: R, workers: usize) -> Result<ScanSummary> {
    scan_with(source, workers, &Classifier::default())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Conventional file name for the connected graphs on `n` vertices.
pub fn list_file_name(n: usize) -> String {
    format!("graph{n}c.g6")
}

/// Checks that a list holds exactly one graph per isomorphism class of
/// connected graphs on `n <= 7` vertices, using the brute-force oracle.
pub fn cross_validate(path: &Path, n: usize) -> Result<()> {
    let mismatch = |message: String| Error::OracleMismatch {
        path: path.display().to_string(),
        message,
    };
    let expected = canon::connected_codes(n)?;
    let mut seen = BTreeSet::new();
    for rec in graph6::read_records(open(path)?) {
        let rec = rec?;
        if rec.graph.n() != n {
            return Err(mismatch(format!(
                "line {} has {} vertices",
                rec.line,
                rec.graph.n()
            )));
        }
        if !seen.insert(canon::canonical_min_code(&rec.graph)) {
            return Err(mismatch(format!(
                "line {} duplicates an earlier class",
                rec.line
            )));
        }
    }
    if seen != expected {
        return Err(mismatch(format!(
            "{} classes in file, {} expected, {} missing",
            seen.len(),
            expected.len(),
            expected.difference(&seen).count()
        )));
    }
    Ok(())
}

/// Scans `dir/graph{n}c.g6` for `n = 1..=max_n`, cross-validating the lists
/// with `n <= 7` against the enumeration oracle first.
pub fn reproduce_table(max_n: usize, dir: &Path, workers: usize) -> Result<Vec<ScanSummary>> {
    let sources: Vec<(usize, PathBuf)> = (1..=max_n)
        .map(|n| (n, dir.join(list_file_name(n))))
        .collect();
    for (_, path) in &sources {
        if !path.is_file() {
            return Err(Error::Io {
                path: path.display().to_string(),
                message: "graph list not found".into(),
            });
        }
    }
    sources
        .iter()
        .map(|(n, path)| {
            if *n <= canon::ORACLE_MAX_N {
                cross_validate(path, *n)?;
            }
            scan_stream(open(path)?, workers)
        })
        .collect()
}
