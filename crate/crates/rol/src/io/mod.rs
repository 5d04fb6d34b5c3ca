//! File formats: edge lists, manifests, CSV datasets and PAG text.

mod edge_list;
mod manifest;
mod pag;
mod table;

pub use edge_list::{parse_edge_list, read_edge_list, save_edge_list, write_edge_list, NamedGraph};
pub use manifest::{load_network, parse_manifest, parse_network, Manifest};
pub use pag::{pag_lines, parse_pag, write_pag};
pub use table::{parse_csv, read_csv, write_csv, Dataset};
