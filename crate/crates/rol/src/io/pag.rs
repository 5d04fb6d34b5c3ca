//! Partial ancestral graphs as text, one edge per line: `a o-> b`,
//! `a --- b`, `a <-> b`, ...

use std::collections::HashMap;

use rol_core::discovery::{EndMark, PagGraph};
use rol_core::graph::Skeleton;

use crate::error::{Error, Result};

pub fn pag_lines(pag: &PagGraph, names: &[String]) -> Vec<String> {
    pag.edge_lines(|v| names[v].as_str()).collect()
}

pub fn write_pag(pag: &PagGraph, names: &[String]) -> String {
    let mut out = format!("n {}\n", pag.num_vertices());
    for line in pag_lines(pag, names) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn left_mark(c: char) -> Option<EndMark> {
    match c {
        '<' => Some(EndMark::Arrow),
        '-' => Some(EndMark::Tail),
        'o' => Some(EndMark::Circle),
        _ => None,
    }
}

fn right_mark(c: char) -> Option<EndMark> {
    match c {
        '>' => Some(EndMark::Arrow),
        '-' => Some(EndMark::Tail),
        'o' => Some(EndMark::Circle),
        _ => None,
    }
}

/// Parses the output of [`write_pag`] given the vertex names.
pub fn parse_pag(text: &str, names: &[String]) -> Result<PagGraph> {
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut pag = PagGraph::from_skeleton(&Skeleton::new(names.len()));
    let resolve = |tok: &str, line: usize| {
        index
            .get(tok)
            .copied()
            .ok_or_else(|| Error::parse(line, format!("unknown vertex `{tok}`")))
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("n ") {
            continue;
        }
        let [a, edge, b] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(Error::parse(
                ln,
                format!("expected `a <mark><mark> b`, found `{line}`"),
            ));
        };
        let chars: Vec<char> = edge.chars().collect();
        let (Some(ma), Some(mb)) = (
            chars.first().and_then(|&c| left_mark(c)),
            chars.last().and_then(|&c| right_mark(c)),
        ) else {
            return Err(Error::parse(ln, format!("bad edge `{edge}`")));
        };
        if chars.len() != 3 || chars[1] != '-' {
            return Err(Error::parse(ln, format!("bad edge `{edge}`")));
        }
        let (a, b) = (resolve(a, ln)?, resolve(b, ln)?);
        if a == b || pag.is_adjacent(a, b) {
            return Err(Error::parse(ln, format!("duplicate or self edge `{line}`")));
        }
        pag.add_edge(a, b, ma, mb);
    }
    Ok(pag)
}
