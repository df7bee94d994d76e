//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! n 4
//! 1 2
//! 2 3
//! ```
//!
//! The header gives the vertex count; each further line is one undirected
//! edge between 1-based ids. Duplicate edges and self-loops are rejected.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clique_core::{Graph, Vertex};

use crate::error::{HarnessError, Result};

pub fn parse(text: &str, origin: &Path) -> Result<Graph> {
    let fail = |line: usize, message: String| HarnessError::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut n = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let Some(count) = n else {
            match fields.as_slice() {
                ["n", count] => {
                    let count: usize = count.parse().map_err(|_| fail(line, format!("bad vertex count {count:?}")))?;
                    n = Some(count);
                    continue;
                }
                _ => return Err(fail(line, "expected header `n <count>`".into())),
            }
        };
        let [u, v] = fields.as_slice() else {
            return Err(fail(line, format!("expected two vertex ids, got {body:?}")));
        };
        let id = |s: &str| -> Result<Vertex> {
            match s.parse::<Vertex>() {
                Ok(x) if x >= 1 && x as usize <= count => Ok(x),
                _ => Err(fail(line, format!("vertex {s:?} outside 1..={count}"))),
            }
        };
        let (u, v) = (id(u)?, id(v)?);
        if u == v {
            return Err(fail(line, format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(fail(line, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    let n = n.ok_or_else(|| fail(0, "missing header `n <count>`".into()))?;
    Graph::from_edges(n, edges).map_err(HarnessError::runtime(origin.display().to_string()))
}

pub fn read(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(HarnessError::io(path))?;
    parse(&text, path)
}

pub fn render(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, render(g)).map_err(HarnessError::io(path))
}
