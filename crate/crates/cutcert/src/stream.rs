//! Text format for dynamic edge streams.
//!
//! ```text
//! # comment
//! n 6 k 2
//! + 1 2
//! + 2 3
//! - 1 2
//! ```
//!
//! The header line fixes the vertex count and the target connectivity;
//! every following non-comment line is a signed edge event.

use std::io::{BufRead, Write};

use crate::graph_sketch::{ConnSketch, EdgeUpdate};
use crate::oracle::ExactGraph;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamHeader {
    pub n: u32,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stream {
    pub header: StreamHeader,
    pub updates: Vec<EdgeUpdate>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_stream<R: BufRead>(reader: R) -> Result<Stream> {
    let mut header: Option<StreamHeader> = None;
    let mut updates = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (&header, fields.as_slice()) {
            (None, ["n", n, "k", k]) => {
                let n: u32 = n
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad vertex count {n:?}")))?;
                let k: u32 = k
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad connectivity target {k:?}")))?;
                if n < 2 {
                    return Err(parse_err(lineno, "need at least two vertices"));
                }
                if k < 1 || k > n - 1 {
                    return Err(parse_err(
                        lineno,
                        format!("k = {k} must lie in [1, n - 1] = [1, {}]", n - 1),
                    ));
                }
                header = Some(StreamHeader { n, k });
            }
            (None, _) => {
                return Err(parse_err(
                    lineno,
                    "expected header line \"n <N> k <K>\" before edge events",
                ))
            }
            (Some(h), [sign @ ("+" | "-"), u, v]) => {
                let u: u32 = u
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad endpoint {u:?}")))?;
                let v: u32 = v
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad endpoint {v:?}")))?;
                if u == v {
                    return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
                }
                if u < 1 || v < 1 || u > h.n || v > h.n {
                    return Err(parse_err(
                        lineno,
                        format!("endpoint outside [1, {}]", h.n),
                    ));
                }
                updates.push(if *sign == "+" {
                    EdgeUpdate::Insert(u, v)
                } else {
                    EdgeUpdate::Delete(u, v)
                });
            }
            (Some(_), _) => {
                return Err(parse_err(
                    lineno,
                    format!("unrecognized event line {line:?}"),
                ))
            }
        }
    }
    let header = header.ok_or_else(|| parse_err(0, "empty stream: missing header"))?;
    Ok(Stream { header, updates })
}

pub fn write_stream<W: Write>(mut w: W, stream: &Stream) -> Result<()> {
    writeln!(w, "n {} k {}", stream.header.n, stream.header.k)?;
    for up in &stream.updates {
        let (u, v) = up.endpoints();
        let sign = if up.sign() > 0 { '+' } else { '-' };
        writeln!(w, "{sign} {u} {v}")?;
    }
    Ok(())
}

/// Builds and populates a sketch from a parsed stream in one pass.
pub fn ingest(stream: &Stream, seed: u64) -> Result<ConnSketch> {
    let mut cs = ConnSketch::new(stream.header.n, stream.header.k, seed)?;
    cs.apply_all(&stream.updates)?;
    Ok(cs)
}

/// Replays the stream into an exact graph. `strict` rejects duplicate
/// inserts and deletes of absent edges at their exact stream position.
pub fn replay_exact(stream: &Stream, strict: bool) -> Result<ExactGraph> {
    let mut g = if strict {
        ExactGraph::new_strict(stream.header.n)
    } else {
        ExactGraph::new(stream.header.n)
    };
    for (i, up) in stream.updates.iter().enumerate() {
        let (u, v) = up.endpoints();
        let res = match up {
            EdgeUpdate::Insert(..) => g.insert(u, v),
            EdgeUpdate::Delete(..) => g.delete(u, v),
        };
        res.map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse {
                line: i + 2, // 1-based, after the header line
                msg,
            },
            other => other,
        })?;
    }
    Ok(g)
}
