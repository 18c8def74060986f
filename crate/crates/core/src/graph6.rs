//! graph6 text encoding (short form, up to 62 vertices).
//!
//! A record is one size byte `n + 63` followed by the upper triangle of the
//! adjacency matrix in column order `(0,1), (0,2), (1,2), (0,3), ...`, packed
//! six bits per byte (most significant first), each byte offset by 63.
//! Unused trailing bits must be zero.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count representable with the single-byte size prefix.
pub const MAX_VERTICES: usize = 62;

/// Optional header that may precede the first record of a file.
pub const HEADER: &str = ">>graph6<<";

fn parse_error(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        reason: reason.into(),
    }
}

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn decode(line: &str) -> Result<Graph> {
    let bytes = line.strip_suffix('\n').unwrap_or(line);
    let bytes = bytes.strip_suffix('\r').unwrap_or(bytes).as_bytes();
    let Some((&size, body)) = bytes.split_first() else {
        return Err(parse_error(0, "empty record"));
    };
    if !(63..=126).contains(&size) {
        return Err(parse_error(0, format!("size byte {size} outside 63..=126")));
    }
    if size == 126 {
        return Err(parse_error(
            0,
            "multi-byte size form (n > 62) is not supported",
        ));
    }
    let n = (size - 63) as usize;
    if n == 0 {
        return Err(parse_error(0, "zero-vertex graph"));
    }
    let expected = data_len(n);
    if body.len() != expected {
        return Err(parse_error(
            1 + body.len().min(expected),
            format!(
                "expected {expected} data bytes for n={n}, found {}",
                body.len()
            ),
        ));
    }
    let mut values = Vec::with_capacity(expected);
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_error(i + 1, format!("byte {b} outside 63..=126")));
        }
        values.push(b - 63);
    }

    let mut adj = vec![false; n * n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if values[k / 6] >> (5 - k % 6) & 1 == 1 {
                adj[i * n + j] = true;
                adj[j * n + i] = true;
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let pad_mask = (1u8 << (6 - k % 6)) - 1;
        if values[k / 6] & pad_mask != 0 {
            return Err(parse_error(k / 6 + 1, "nonzero padding bits"));
        }
    }
    Ok(Graph::from_raw(n, adj))
}

pub fn encode(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > MAX_VERTICES {
        return Err(Error::UnsupportedSize {
            n,
            reason: "graph6 short form holds at most 62 vertices",
        });
    }
    let mut values = vec![0u8; data_len(n)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                values[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    let mut out = String::with_capacity(values.len() + 1);
    out.push((n as u8 + 63) as char);
    out.extend(values.into_iter().map(|v| (v + 63) as char));
    Ok(out)
}

/// Parses a stream of graph6 records, one per line. The optional header is
/// skipped and blank lines are ignored. Errors carry the 1-based line number.
pub fn read_records<R: BufRead>(reader: R) -> impl Iterator<Item = Result<Record>> {
    reader.lines().enumerate().filter_map(|(i, line)| {
        let line_no = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                return Some(Err(Error::Io {
                    path: format!("<stream line {line_no}>"),
                    message: e.to_string(),
                }))
            }
        };
        let text = line.strip_prefix(HEADER).unwrap_or(&line).trim_end();
        if text.is_empty() {
            return None;
        }
        Some(
            decode(text)
                .map(|graph| Record {
                    line: line_no,
                    text: text.to_string(),
                    graph,
                })
                .map_err(|e| Error::Line {
                    line: line_no,
                    source: Box::new(e),
                }),
        )
    })
}

/// One parsed line of a graph6 stream.
#[derive(Debug, Clone)]
pub struct Record {
    pub line: usize,
    pub text: String,
    pub graph: Graph,
}
