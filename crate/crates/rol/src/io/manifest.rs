use std::path::Path;

use serde::{Deserialize, Serialize};

use super::edge_list::{parse_edge_list, NamedGraph};
use crate::error::{read_to_string, Error, Result};

/// Expected shape of a network file. Degree fields are optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub n: usize,
    pub e: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_in_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
}

impl Manifest {
    pub fn of(g: &NamedGraph) -> Self {
        Manifest {
            n: g.graph.num_vertices(),
            e: g.graph.num_edges(),
            max_in_degree: Some(g.max_in_degree()),
            max_degree: Some(g.max_degree()),
        }
    }

    pub fn check(&self, g: &NamedGraph) -> Result<()> {
        let actual = Manifest::of(g);
        let mut problems = Vec::new();
        if self.n != actual.n {
            problems.push(format!("n: expected {}, found {}", self.n, actual.n));
        }
        if self.e != actual.e {
            problems.push(format!("e: expected {}, found {}", self.e, actual.e));
        }
        if self
            .max_in_degree
            .is_some_and(|d| Some(d) != actual.max_in_degree)
        {
            problems.push(format!(
                "max in-degree: expected {}, found {}",
                self.max_in_degree.unwrap_or(0),
                actual.max_in_degree.unwrap_or(0)
            ));
        }
        if self
            .max_degree
            .is_some_and(|d| Some(d) != actual.max_degree)
        {
            problems.push(format!(
                "max degree: expected {}, found {}",
                self.max_degree.unwrap_or(0),
                actual.max_degree.unwrap_or(0)
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Manifest(problems.join("; ")))
        }
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    Ok(serde_json::from_str(text)?)
}

/// Parses an edge list and checks it against `manifest` when given.
pub fn parse_network(edges: &str, manifest: Option<&str>) -> Result<NamedGraph> {
    let g = parse_edge_list(edges)?;
    if let Some(m) = manifest {
        parse_manifest(m)?.check(&g)?;
    }
    Ok(g)
}

/// Reads an edge-list file. A manifest next to it (same stem, `.json`) is
/// checked when present.
pub fn load_network(path: &Path) -> Result<NamedGraph> {
    let edges = read_to_string(path)?;
    let manifest_path = path.with_extension("json");
    let manifest = if manifest_path.is_file() {
        Some(read_to_string(&manifest_path)?)
    } else {
        None
    };
    parse_network(&edges, manifest.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_is_reported() {
        let edges = "n 3\n0 -> 1\n";
        assert!(parse_network(edges, Some(r#"{"n": 3, "e": 1}"#)).is_ok());
        let err = parse_network(edges, Some(r#"{"n": 3, "e": 2}"#)).unwrap_err();
        assert!(matches!(err, Error::Manifest(ref m) if m.contains("e: expected 2")));
        let err = parse_network(edges, Some(r#"{"n": 3, "e": 1, "max_degree": 2}"#)).unwrap_err();
        assert!(matches!(err, Error::Manifest(_)));
        assert!(parse_network(edges, Some("{")).is_err());
    }
}
