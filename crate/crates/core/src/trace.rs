//! Dynamic instruction traces and the dependency graphs built from them.
//!
//! A trace has one instruction per line, written as space-separated
//! `key=value` fields:
//!
//! ```text
//! # comment
//! op=alloca dst=%1
//! op=store src=%a,%1 addr=0x7ffc10 t=12
//! op=load dst=%3 addr=0x7ffc10 t=4
//! ```
//!
//! `op` is required. `src` is a comma-separated register list, `dst=-`
//! means no destination, `addr` is a hex address and `t` the positive
//! memory latency in cycles; `addr` and `t` appear together or not at all.
//! The record id is the 0-based line order.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{Edge, VertexId, WeightedDigraph};

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("line {line}: malformed field `{field}`")]
    MalformedField { line: usize, field: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: missing `op`")]
    MissingOpcode { line: usize },
    #[error("line {line}: `addr` requires `t`")]
    AddressWithoutTime { line: usize },
    #[error("line {line}: `t` requires `addr`")]
    TimeWithoutAddress { line: usize },
    #[error("line {line}: bad address `{value}`")]
    BadAddress { line: usize, value: String },
    #[error("line {line}: memory time must be a positive integer, got `{value}`")]
    BadTime { line: usize, value: String },
    #[error("trace has more records than a vertex id can index")]
    TooLong,
}

/// One executed IR instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub id: usize,
    pub opcode: String,
    pub dst: Option<String>,
    pub srcs: Vec<String>,
    pub addr: Option<u64>,
    pub mem_time: Option<u64>,
}

impl TraceRecord {
    pub fn is_memory_op(&self) -> bool {
        self.addr.is_some()
    }

    /// Stores write their address; every other addressed instruction reads it.
    pub fn is_store(&self) -> bool {
        self.addr.is_some() && self.opcode.starts_with("store")
    }
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op={}", self.opcode)?;
        if let Some(dst) = &self.dst {
            write!(f, " dst={dst}")?;
        }
        if !self.srcs.is_empty() {
            write!(f, " src={}", self.srcs.join(","))?;
        }
        if let (Some(addr), Some(t)) = (self.addr, self.mem_time) {
            write!(f, " addr={addr:#x} t={t}")?;
        }
        Ok(())
    }
}

/// True when the first non-comment token of `text` is an `op=` field.
pub fn looks_like_trace(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("op="))
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, TraceError> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let id = records.len();
        records.push(parse_record(id, idx + 1, line)?);
    }
    if records.len() > VertexId::MAX as usize {
        return Err(TraceError::TooLong);
    }
    Ok(records)
}

fn parse_record(id: usize, line: usize, text: &str) -> Result<TraceRecord, TraceError> {
    let mut fields: HashMap<&str, &str> = HashMap::new();
    for field in text.split_whitespace() {
        let Some((key, value)) = field.split_once('=') else {
            return Err(TraceError::MalformedField { line, field: field.into() });
        };
        if value.is_empty() {
            return Err(TraceError::MalformedField { line, field: field.into() });
        }
        if !matches!(key, "op" | "dst" | "src" | "addr" | "t") {
            return Err(TraceError::UnknownKey { line, key: key.into() });
        }
        if fields.insert(key, value).is_some() {
            return Err(TraceError::DuplicateKey { line, key: key.into() });
        }
    }

    let opcode = fields.get("op").ok_or(TraceError::MissingOpcode { line })?.to_string();
    let dst = fields.get("dst").filter(|d| **d != "-").map(|d| d.to_string());
    let srcs = match fields.get("src") {
        Some(list) => {
            let regs: Vec<String> = list.split(',').map(str::to_string).collect();
            if regs.iter().any(String::is_empty) {
                return Err(TraceError::MalformedField { line, field: format!("src={list}") });
            }
            regs
        }
        None => Vec::new(),
    };
    let addr = fields.get("addr").map(|a| parse_address(a, line)).transpose()?;
    let mem_time = fields
        .get("t")
        .map(|t| match t.parse::<u64>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(TraceError::BadTime { line, value: t.to_string() }),
        })
        .transpose()?;
    match (addr, mem_time) {
        (Some(_), None) => return Err(TraceError::AddressWithoutTime { line }),
        (None, Some(_)) => return Err(TraceError::TimeWithoutAddress { line }),
        _ => {}
    }
    Ok(TraceRecord { id, opcode, dst, srcs, addr, mem_time })
}

fn parse_address(text: &str, line: usize) -> Result<u64, TraceError> {
    let digits = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
    u64::from_str_radix(digits, 16).map_err(|_| TraceError::BadAddress { line, value: text.into() })
}

pub fn format_trace(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "{r}");
    }
    out
}

/// Builds the dependency graph of a trace: one vertex per record, an edge
/// from the latest producer of every source register, and an edge from the
/// latest store to every later read of the same address.
///
/// An edge into a memory instruction weighs that instruction's latency,
/// any other edge weighs 1. Edges are emitted in consumer order.
pub fn build_dependency_graph(records: &[TraceRecord]) -> WeightedDigraph {
    let mut last_writer: HashMap<&str, usize> = HashMap::new();
    let mut last_store: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::new();

    for r in records {
        let weight = r.mem_time.map_or(1.0, |t| t as f64);
        let mut producers: Vec<usize> = Vec::new();
        for src in &r.srcs {
            if let Some(&p) = last_writer.get(src.as_str()) {
                producers.push(p);
            }
        }
        if let Some(addr) = r.addr {
            if !r.is_store() {
                if let Some(&s) = last_store.get(&addr) {
                    producers.push(s);
                }
            }
        }
        // register and alias edges from one producer collapse into one
        let mut seen = Vec::with_capacity(producers.len());
        for p in producers {
            if !seen.contains(&p) {
                seen.push(p);
                edges.push(Edge::new(p as VertexId, r.id as VertexId, weight));
            }
        }

        if let Some(dst) = &r.dst {
            last_writer.insert(dst.as_str(), r.id);
        }
        if r.is_store() {
            last_store.insert(r.addr.expect("store has an address"), r.id);
        }
    }

    WeightedDigraph::new(records.len(), edges).expect("trace edges point forward and are unique")
}

/// Address -> ids of the instructions touching it.
pub fn address_map(records: &[TraceRecord]) -> BTreeMap<u64, Vec<VertexId>> {
    let mut map: BTreeMap<u64, Vec<VertexId>> = BTreeMap::new();
    for r in records {
        if let Some(a) = r.addr {
            map.entry(a).or_default().push(r.id as VertexId);
        }
    }
    map
}
