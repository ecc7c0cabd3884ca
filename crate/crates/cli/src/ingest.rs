//! Edge list parsing.
//!
//! Three concrete formats are supported, plus auto-detection:
//!
//! * **snap** — whitespace-separated `u v` pairs, `#` and `%` comment lines.
//! * **dimacs-gr** — `c` comment lines, a `p sp <n> <m>` problem line, and
//!   `a u v w` arc lines with 1-based ids and positive weights.
//! * **weighted-tsv** — whitespace-separated `u v w` triples with positive
//!   weights, `#` and `%` comment lines.
//!
//! Vertex ids are compacted to `0..vertex_n` in order of first appearance
//! (which also turns 1-based dimacs ids into 0-based ones), exact directed
//! duplicates are dropped (first occurrence wins), and self-loops are kept —
//! algorithms that cannot use them discard them later. The compaction map is
//! part of the result: [`EdgeList::ids`] holds each vertex's original file
//! id.

use std::collections::HashMap;

use crate::{CliError, Result};

/// Input format selector; `Auto` sniffs the first meaningful lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Auto,
    Snap,
    Dimacs,
    Tsv,
}

impl std::str::FromStr for FileFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(FileFormat::Auto),
            "snap" => Ok(FileFormat::Snap),
            "dimacs-gr" | "dimacs" => Ok(FileFormat::Dimacs),
            "weighted-tsv" | "tsv" => Ok(FileFormat::Tsv),
            other => Err(CliError::Config(format!(
                "unknown input format {other:?} (expected auto, snap, dimacs-gr, or weighted-tsv)"
            ))),
        }
    }
}

impl std::fmt::Display for FileFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            FileFormat::Auto => "auto",
            FileFormat::Snap => "snap",
            FileFormat::Dimacs => "dimacs-gr",
            FileFormat::Tsv => "weighted-tsv",
        };
        f.write_str(name)
    }
}

/// A parsed edge list with compacted vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    /// Number of distinct endpoints.
    pub vertex_n: u32,
    /// Directed edges in input order, deduplicated.
    pub edges: Vec<(u32, u32)>,
    /// Per-edge weights, present when the format carries them.
    pub weights: Option<Vec<u32>>,
    /// The id compaction map: `ids[v]` is the original file id of vertex `v`.
    pub ids: Vec<u64>,
    /// The format the data was actually parsed as.
    pub format: FileFormat,
}

fn is_comment(line: &str, format: FileFormat) -> bool {
    let first = line.chars().next();
    match format {
        FileFormat::Dimacs => first == Some('c'),
        _ => matches!(first, Some('#') | Some('%')),
    }
}

/// Sniffs the concrete format of `text`.
fn detect(text: &str) -> Result<FileFormat> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        if line.starts_with("c ") || line == "c" || line.starts_with("p ") || line.starts_with("a ")
        {
            return Ok(FileFormat::Dimacs);
        }
        return match line.split_whitespace().count() {
            2 => Ok(FileFormat::Snap),
            3 => Ok(FileFormat::Tsv),
            n => Err(CliError::Parse(
                idx + 1,
                format!("cannot detect format from a {n}-column line"),
            )),
        };
    }
    Err(CliError::EmptyGraph)
}

fn parse_id(tok: &str, line_no: usize) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| CliError::Parse(line_no, format!("bad vertex id {tok:?}")))
}

fn parse_weight(tok: &str, line_no: usize) -> Result<u32> {
    let w: u64 = tok
        .parse()
        .map_err(|_| CliError::Parse(line_no, format!("bad weight {tok:?}")))?;
    if w == 0 || w > u32::MAX as u64 {
        return Err(CliError::Parse(
            line_no,
            format!("weight {w} out of range (want 1..=_{})", u32::MAX),
        ));
    }
    Ok(w as u32)
}

/// Parses `text` as `format`, auto-detecting when asked.
pub fn parse_edge_list(text: &str, format: FileFormat) -> Result<EdgeList> {
    let format = match format {
        FileFormat::Auto => detect(text)?,
        f => f,
    };

    let mut compact: HashMap<u64, u32> = HashMap::new();
    let mut ids: Vec<u64> = Vec::new();
    let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let weighted = !matches!(format, FileFormat::Snap);

    let mut push = |raw_u: u64, raw_v: u64, w: Option<u32>| {
        let mut intern = |raw: u64| {
            *compact.entry(raw).or_insert_with(|| {
                ids.push(raw);
                ids.len() as u32 - 1
            })
        };
        let u = intern(raw_u);
        let v = intern(raw_v);
        if seen.insert((u, v), ()).is_none() {
            edges.push((u, v));
            if let Some(w) = w {
                weights.push(w);
            }
        }
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line, format) {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match format {
            FileFormat::Snap => {
                if toks.len() != 2 {
                    return Err(CliError::Parse(
                        line_no,
                        format!("expected 2 columns, found {}", toks.len()),
                    ));
                }
                push(
                    parse_id(toks[0], line_no)?,
                    parse_id(toks[1], line_no)?,
                    None,
                );
            }
            FileFormat::Tsv => {
                if toks.len() != 3 {
                    return Err(CliError::Parse(
                        line_no,
                        format!("expected 3 columns, found {}", toks.len()),
                    ));
                }
                let w = parse_weight(toks[2], line_no)?;
                push(
                    parse_id(toks[0], line_no)?,
                    parse_id(toks[1], line_no)?,
                    Some(w),
                );
            }
            FileFormat::Dimacs => match toks[0] {
                "p" => {
                    if toks.len() != 4 || toks[1] != "sp" {
                        return Err(CliError::Parse(
                            line_no,
                            "expected problem line `p sp <n> <m>`".into(),
                        ));
                    }
                }
                "a" => {
                    if toks.len() != 4 {
                        return Err(CliError::Parse(
                            line_no,
                            format!("expected `a u v w`, found {} columns", toks.len()),
                        ));
                    }
                    let u = parse_id(toks[1], line_no)?;
                    let v = parse_id(toks[2], line_no)?;
                    if u == 0 || v == 0 {
                        return Err(CliError::Parse(line_no, "arc ids are 1-based".into()));
                    }
                    let w = parse_weight(toks[3], line_no)?;
                    // First-seen compaction already maps the 1-based ids to a
                    // dense 0-based range, so no explicit shift is needed.
                    push(u, v, Some(w));
                }
                other => {
                    return Err(CliError::Parse(
                        line_no,
                        format!("unexpected record type {other:?}"),
                    ));
                }
            },
            FileFormat::Auto => unreachable!("resolved above"),
        }
    }

    if edges.is_empty() {
        return Err(CliError::EmptyGraph);
    }
    Ok(EdgeList {
        vertex_n: ids.len() as u32,
        edges,
        weights: weighted.then_some(weights),
        ids,
        format,
    })
}

/// Reads and parses a file.
pub fn load_edge_list(path: &std::path::Path, format: FileFormat) -> Result<EdgeList> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, format)
}
