//! Network structures bundled with the crate, each with a manifest.

use crate::error::{Error, Result};
use crate::io::{parse_network, NamedGraph};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        const BUNDLED: &[(&str, &str, &str)] = &[
            $((
                $name,
                include_str!(concat!("../networks/", $name, ".edges")),
                include_str!(concat!("../networks/", $name, ".json")),
            )),*
        ];
    };
}

bundled!(
    "earthquake",
    "survey",
    "asia",
    "sachs",
    "insurance",
    "alarm"
);

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|&(name, _, _)| name)
}

/// Loads a bundled network by name (case-insensitive), checked against its
/// manifest.
pub fn load(name: &str) -> Result<NamedGraph> {
    let (_, edges, manifest) = BUNDLED
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            Error::config(format!(
                "unknown network `{name}` (bundled: {})",
                names().collect::<Vec<_>>().join(", ")
            ))
        })?;
    parse_network(edges, Some(manifest))
}
