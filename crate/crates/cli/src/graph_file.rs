//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! 4
//! 1 2
//! 2 3
//! 3 4
//! ```
//!
//! The first non-comment line is the node count; every later line is one edge
//! `i j` with `1 <= i < j <= n`. Nodes are 1-based in the file and 0-based in
//! memory.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lapspec::{build_graph, Graph};

use crate::error::{CliError, Result};

pub fn parse_graph(text: &str, path: &Path) -> Result<Graph> {
    let fail = |line: usize, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut n = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let Some(n) = n else {
            if fields.len() != 1 {
                return Err(fail(
                    line,
                    "expected the node count alone on the first line".into(),
                ));
            }
            let count: usize = fields[0]
                .parse()
                .map_err(|_| fail(line, format!("bad node count {:?}", fields[0])))?;
            if count == 0 {
                return Err(fail(line, "node count must be positive".into()));
            }
            n = Some(count);
            continue;
        };
        if fields.len() != 2 {
            return Err(fail(line, "expected an edge `i j`".into()));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| fail(line, format!("bad node index {s:?}")))
        };
        let (i, j) = (parse(fields[0])?, parse(fields[1])?);
        if i == 0 || j > n {
            return Err(fail(line, format!("edge {i} {j} outside 1..={n}")));
        }
        if i >= j {
            return Err(fail(line, format!("edge {i} {j} must have i < j")));
        }
        if !seen.insert((i, j)) {
            return Err(fail(line, format!("duplicate edge {i} {j}")));
        }
        edges.push((i - 1, j - 1));
    }
    let n = n.ok_or_else(|| fail(0, "missing node count".into()))?;
    // every check build_graph makes has already been made with a line number
    Ok(build_graph(n, &edges).expect("validated edge list"))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_graph(&text, path)
}

/// Node count, then the edges in sorted order.
pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{}\n", g.node_count());
    for &(i, j) in g.edges() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    out
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, format_graph(g)).map_err(CliError::io(path))
}
