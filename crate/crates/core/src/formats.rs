//! Line-oriented assignment and mapping files.
//!
//! ```text
//! c <p> <edges>            m <rows> <cols> <p>
//! <edge> <cluster>         <cluster> <core>
//! ```
//!
//! Lines starting with `#` are comments. Every index appears exactly once.

use thiserror::Error;

use crate::partition::ClusterId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("index {index} listed twice")]
    Duplicate { index: usize },
    #[error("index {index} missing")]
    Missing { index: usize },
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed { line, msg: msg.into() }
}

// (line, index, value)
type Row = (usize, usize, usize);

/// Header fields and body rows, with comments skipped.
fn parse_table(text: &str, tag: &'static str, header_len: usize) -> Result<(Vec<usize>, Vec<Row>), FormatError> {
    let mut header = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let nums = |toks: &[&str]| -> Result<Vec<usize>, FormatError> {
            toks.iter()
                .map(|t| t.parse().map_err(|_| malformed(line_no, format!("bad number `{t}`"))))
                .collect()
        };
        match header {
            None => {
                if fields[0] != tag || fields.len() != header_len + 1 {
                    return Err(FormatError::MissingHeader(tag));
                }
                header = Some(nums(&fields[1..])?);
            }
            Some(_) => {
                if fields.len() != 2 {
                    return Err(malformed(line_no, format!("expected two fields, got `{line}`")));
                }
                let v = nums(&fields)?;
                rows.push((line_no, v[0], v[1]));
            }
        }
    }
    Ok((header.ok_or(FormatError::MissingHeader(tag))?, rows))
}

fn dense(len: usize, rows: Vec<Row>, bound: usize, what: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = vec![None; len];
    for (line, index, value) in rows {
        if index >= len {
            return Err(malformed(line, format!("index {index} out of range ({len})")));
        }
        if value >= bound {
            return Err(malformed(line, format!("{what} {value} out of range ({bound})")));
        }
        if out[index].replace(value).is_some() {
            return Err(FormatError::Duplicate { index });
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(index, v)| v.ok_or(FormatError::Missing { index }))
        .collect()
}

fn comments(preamble: &[String]) -> String {
    preamble.iter().map(|l| format!("# {l}\n")).collect()
}

/// Edge -> cluster assignment with its cluster count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentFile {
    pub p: usize,
    pub clusters: Vec<ClusterId>,
}

pub fn format_assignment(p: usize, clusters: &[ClusterId], preamble: &[String]) -> String {
    let mut out = comments(preamble);
    out.push_str(&format!("c {p} {}\n", clusters.len()));
    for (e, c) in clusters.iter().enumerate() {
        out.push_str(&format!("{e} {c}\n"));
    }
    out
}

pub fn parse_assignment(text: &str) -> Result<AssignmentFile, FormatError> {
    let (header, rows) = parse_table(text, "c", 2)?;
    let (p, m) = (header[0], header[1]);
    let clusters = dense(m, rows, p, "cluster")?;
    Ok(AssignmentFile { p, clusters: clusters.into_iter().map(|c| c as ClusterId).collect() })
}

/// Cluster -> core map with its mesh shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingFile {
    pub rows: usize,
    pub cols: usize,
    pub core_of: Vec<usize>,
}

pub fn format_mapping(rows: usize, cols: usize, core_of: &[usize], preamble: &[String]) -> String {
    let mut out = comments(preamble);
    out.push_str(&format!("m {rows} {cols} {}\n", core_of.len()));
    for (c, core) in core_of.iter().enumerate() {
        out.push_str(&format!("{c} {core}\n"));
    }
    out
}

pub fn parse_mapping(text: &str) -> Result<MappingFile, FormatError> {
    let (header, rows) = parse_table(text, "m", 3)?;
    let (r, c, p) = (header[0], header[1], header[2]);
    let core_of = dense(p, rows, r * c, "core")?;
    Ok(MappingFile { rows: r, cols: c, core_of })
}
