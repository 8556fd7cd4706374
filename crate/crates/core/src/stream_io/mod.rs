//! Text stream files, synthetic generators and the query-vs-oracle harness.
//!
//! A stream file is one update per line:
//!
//! ```text
//! p 500 2 1        # header: n, max arity, weighted (0/1)
//! + 3 7            # insert {3,7}, weight 1
//! + 1 2 3 4 @1.5   # insert a 4-ary hyperedge of weight 1.5
//! - 3 7 2.5        # a trailing non-integer token is also a weight
//! ```
//!
//! `#` starts a comment. The header is optional when reading; without it `n`
//! is one more than the largest vertex seen.

mod compare;
mod generate;

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Delta, Edge, EdgeUpdate, VertexId, Weight};

pub use compare::{compare, judge, oracle_report, CompareError, CompareRow, CompareTable, Verdict};
pub use generate::{generate, Family, GeneratedStream, GeneratorSpec};

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamHeader {
    pub n: u64,
    pub max_arity: usize,
    pub weighted: bool,
}

/// A parsed stream held in memory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamFile {
    pub header: StreamHeader,
    pub updates: Vec<EdgeUpdate>,
}

impl StreamFile {
    /// Header inferred from the updates.
    pub fn from_updates(updates: Vec<EdgeUpdate>) -> Self {
        let n = updates.iter().flat_map(|u| u.edge.vertices().last().copied()).max().map_or(1, |v| u64::from(v) + 1);
        let max_arity = updates.iter().map(|u| u.edge.arity()).max().unwrap_or(2).max(2);
        let weighted = updates.iter().any(|u| u.weight != Weight::ONE);
        StreamFile { header: StreamHeader { n, max_arity, weighted }, updates }
    }
}

/// Parses one update line (no comment, no header).
pub fn parse_update(line: &str) -> Result<EdgeUpdate, String> {
    let mut tokens = line.split_whitespace();
    let delta = match tokens.next() {
        Some("+") => Delta::Insert,
        Some("-") => Delta::Delete,
        Some(t) => return Err(format!("expected '+' or '-', found '{t}'")),
        None => return Err("empty update".into()),
    };
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut weight: Option<f64> = None;
    for t in tokens {
        if weight.is_some() {
            return Err(format!("token '{t}' after the weight"));
        }
        if let Some(w) = t.strip_prefix('@') {
            weight = Some(w.parse().map_err(|_| format!("bad weight '{t}'"))?);
        } else if let Ok(v) = t.parse::<VertexId>() {
            vertices.push(v);
        } else if let Ok(w) = t.parse::<f64>() {
            weight = Some(w);
        } else {
            return Err(format!("bad token '{t}'"));
        }
    }
    let edge = Edge::new(vertices).map_err(|e| e.to_string())?;
    let weight = Weight::new(weight.unwrap_or(1.0)).map_err(|e| e.to_string())?;
    Ok(EdgeUpdate { edge, weight, delta })
}

fn parse_header(rest: &str) -> Result<StreamHeader, String> {
    let t: Vec<&str> = rest.split_whitespace().collect();
    if t.len() != 3 {
        return Err("header is 'p <n> <max_arity> <weighted 0|1>'".into());
    }
    let n: u64 = t[0].parse().map_err(|_| format!("bad n '{}'", t[0]))?;
    let max_arity: usize = t[1].parse().map_err(|_| format!("bad arity '{}'", t[1]))?;
    let weighted = match t[2] {
        "0" => false,
        "1" => true,
        other => return Err(format!("bad weighted flag '{other}'")),
    };
    if n == 0 || max_arity == 0 {
        return Err("n and max arity must be positive".into());
    }
    Ok(StreamHeader { n, max_arity, weighted })
}

/// Line-at-a-time reader. Yields updates in order; each error carries its
/// line number.
pub struct StreamReader<R> {
    input: R,
    line_no: usize,
    buf: String,
    header: Option<StreamHeader>,
    seen_update: bool,
}

impl<R: BufRead> StreamReader<R> {
    pub fn new(input: R) -> Self {
        StreamReader { input, line_no: 0, buf: String::new(), header: None, seen_update: false }
    }

    pub fn header(&self) -> Option<StreamHeader> {
        self.header
    }

    fn fail<T>(&self, reason: String) -> Result<T, StreamError> {
        Err(StreamError::Parse { line: self.line_no, reason })
    }

    fn next_update(&mut self) -> Result<Option<EdgeUpdate>, StreamError> {
        loop {
            self.buf.clear();
            if self.input.read_line(&mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            let line = self.buf.split('#').next().unwrap_or("").trim().to_string();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                if self.header.is_some() || self.seen_update {
                    return self.fail("header must come first and only once".into());
                }
                match parse_header(rest) {
                    Ok(h) => self.header = Some(h),
                    Err(e) => return self.fail(e),
                }
                continue;
            }
            let update = match parse_update(&line) {
                Ok(u) => u,
                Err(e) => return self.fail(e),
            };
            if let Some(h) = self.header {
                if let Err(e) = update.edge.check_bound(h.n) {
                    return self.fail(e.to_string());
                }
                if update.edge.arity() > h.max_arity {
                    return self.fail(format!("arity {} above header maximum {}", update.edge.arity(), h.max_arity));
                }
                if !h.weighted && update.weight != Weight::ONE {
                    return self.fail("weight in an unweighted stream".into());
                }
            }
            self.seen_update = true;
            return Ok(Some(update));
        }
    }
}

impl<R: BufRead> Iterator for StreamReader<R> {
    type Item = Result<EdgeUpdate, StreamError>;
    fn next(&mut self) -> Option<Self::Item> {
        self.next_update().transpose()
    }
}

/// Reads a whole stream.
pub fn read_stream<R: BufRead>(input: R) -> Result<StreamFile, StreamError> {
    let mut reader = StreamReader::new(input);
    let updates = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    Ok(match reader.header() {
        Some(header) => StreamFile { header, updates },
        None => StreamFile::from_updates(updates),
    })
}

pub fn parse_stream(text: &str) -> Result<StreamFile, StreamError> {
    read_stream(text.as_bytes())
}

pub fn format_update(u: &EdgeUpdate) -> String {
    let mut s = String::with_capacity(16);
    s.push(if u.delta == Delta::Insert { '+' } else { '-' });
    for v in u.edge.vertices() {
        let _ = write!(s, " {v}");
    }
    if u.weight != Weight::ONE {
        let _ = write!(s, " @{}", u.weight.get());
    }
    s
}

pub fn write_stream<W: Write>(mut out: W, stream: &StreamFile) -> io::Result<()> {
    let h = stream.header;
    writeln!(out, "p {} {} {}", h.n, h.max_arity, u8::from(h.weighted))?;
    for u in &stream.updates {
        writeln!(out, "{}", format_update(u))?;
    }
    out.flush()
}

pub fn stream_to_string(stream: &StreamFile) -> String {
    let mut buf = Vec::new();
    write_stream(&mut buf, stream).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
