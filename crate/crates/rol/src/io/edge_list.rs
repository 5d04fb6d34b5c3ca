//! Plain-text mixed graphs.
//!
//! ```text
//! # comment
//! n 3
//! vertex
//!   smoke
//!   lung
//!   xray
//! end
//! smoke -> lung
//! lung <-> xray
//! ```
//!
//! The `vertex` block is optional; without it vertices are the integers
//! `0..n`. Endpoints may be names or indices.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rol_core::graph::{GraphBuilder, MixedGraph};
use rol_core::VertexId;

use crate::error::{read_to_string, write_string, Error, Result};

/// A graph with vertex names; `names[i]` labels vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    pub names: Vec<String>,
    pub graph: MixedGraph,
}

impl NamedGraph {
    /// Names `"0"`, `"1"`, ...
    pub fn unnamed(graph: MixedGraph) -> Self {
        NamedGraph {
            names: default_names(graph.num_vertices()),
            graph,
        }
    }

    pub fn index_of(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.graph.num_vertices())
            .map(|v| self.graph.parents(v).len())
            .max()
            .unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.graph.num_vertices())
            .map(|v| self.graph.adjacent(v).len())
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && !s.contains(['#', '<', '>'])
        && !s.chars().any(char::is_whitespace)
        && s.parse::<usize>().is_err()
}

/// Line number (1-based) and content of every non-blank line, comments
/// removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_edge_list(text: &str) -> Result<NamedGraph> {
    let mut lines = content_lines(text).peekable();
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n <count>` header"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|_| Error::parse(ln, format!("bad vertex count `{count}`")))?,
        _ => {
            return Err(Error::parse(
                ln,
                format!("expected `n <count>`, found `{header}`"),
            ))
        }
    };
    let mut builder = GraphBuilder::new(n).map_err(|e| Error::parse(ln, e.to_string()))?;

    let mut names = default_names(n);
    let mut index: HashMap<String, VertexId> = HashMap::new();
    if let Some(&(ln, "vertex")) = lines.peek() {
        lines.next();
        let mut declared = Vec::new();
        loop {
            let Some((l, name)) = lines.next() else {
                return Err(Error::parse(ln, "unterminated `vertex` block"));
            };
            if name == "end" {
                break;
            }
            if !valid_name(name) {
                return Err(Error::parse(l, format!("invalid vertex name `{name}`")));
            }
            if index.insert(name.to_string(), declared.len()).is_some() {
                return Err(Error::parse(l, format!("vertex `{name}` declared twice")));
            }
            declared.push(name.to_string());
        }
        if declared.len() != n {
            return Err(Error::parse(
                ln,
                format!(
                    "`vertex` block lists {} names, header says {n}",
                    declared.len()
                ),
            ));
        }
        names = declared;
    }

    let resolve = |tok: &str, line: usize| -> Result<VertexId> {
        if let Some(&v) = index.get(tok) {
            return Ok(v);
        }
        match tok.parse::<usize>() {
            Ok(v) if v < n => Ok(v),
            Ok(v) => Err(Error::parse(
                line,
                format!("vertex {v} out of range for n = {n}"),
            )),
            Err(_) => Err(Error::parse(line, format!("unknown vertex `{tok}`"))),
        }
    };

    for (ln, line) in lines {
        let (a, arrow, b) = match line.split_whitespace().collect::<Vec<_>>()[..] {
            [a, arrow, b] => (a, arrow, b),
            _ => {
                return Err(Error::parse(
                    ln,
                    format!("expected `a -> b` or `a <-> b`, found `{line}`"),
                ))
            }
        };
        let (a, b) = (resolve(a, ln)?, resolve(b, ln)?);
        let added = match arrow {
            "->" => builder.directed(a, b),
            "<->" => builder.bidirected(a, b),
            _ => return Err(Error::parse(ln, format!("unknown edge type `{arrow}`"))),
        };
        added.map_err(|e| Error::parse(ln, e.to_string()))?;
    }
    Ok(NamedGraph {
        names,
        graph: builder.build(),
    })
}

pub fn write_edge_list(g: &NamedGraph) -> String {
    let n = g.graph.num_vertices();
    let mut out = format!("n {n}\n");
    if g.names != default_names(n) {
        out.push_str("vertex\n");
        for name in &g.names {
            let _ = writeln!(out, "  {name}");
        }
        out.push_str("end\n");
    }
    for (p, c) in g.graph.directed_edges() {
        let _ = writeln!(out, "{} -> {}", g.names[p], g.names[c]);
    }
    for (a, b) in g.graph.bidirected_edges() {
        let _ = writeln!(out, "{} <-> {}", g.names[a], g.names[b]);
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<NamedGraph> {
    parse_edge_list(&read_to_string(path)?)
}

pub fn save_edge_list(path: &Path, g: &NamedGraph) -> Result<()> {
    write_string(path, &write_edge_list(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_round_trip() {
        let text = "# demo\nn 3\nvertex\n  a\n  b\n  c\nend\na -> b  # trailing\nb <-> c\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.names, ["a", "b", "c"]);
        assert_eq!(g.graph.directed_edges().collect::<Vec<_>>(), [(0, 1)]);
        assert_eq!(g.graph.bidirected_edges().collect::<Vec<_>>(), [(1, 2)]);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn indices_without_block() {
        let g = parse_edge_list("n 4\n0 -> 3\n2 <-> 1\n").unwrap();
        assert_eq!(g.names, ["0", "1", "2", "3"]);
        assert!(!write_edge_list(&g).contains("vertex"));
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn empty_body() {
        let g = parse_edge_list("n 3\n").unwrap();
        assert_eq!(g.graph.num_vertices(), 3);
        assert_eq!(g.graph.num_edges(), 0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |text: &str| match parse_edge_list(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line("n 3\n0 -> 1\n\n0 -> 1\n"), 4);
        assert_eq!(line("n 3\n0 -> 1\n1 <-> 0\n"), 3);
        assert_eq!(line("n 2\n0 -> 2\n"), 2);
        assert_eq!(line("n 2\n0 => 1\n"), 2);
        assert_eq!(line("n 2\n1 -> 1\n"), 2);
        assert_eq!(line("# only a comment\n"), 1);
        assert_eq!(line("edges 2\n"), 1);
        assert_eq!(line("n 2\nvertex\n a\n a\nend\n"), 4);
        assert_eq!(line("n 2\nvertex\n a\nend\n"), 2);
        assert_eq!(line("n 2\nvertex\n a\n b\n"), 2);
        assert_eq!(line("n 2\nvertex\n a\n b\nend\na -> zz\n"), 6);
    }
}
