//! File formats, bundled networks, replicated experiments and the oracle
//! self-check around [`rol_core`].

pub mod error;
pub mod experiment;
pub mod io;
pub mod networks;
pub mod selfcheck;
pub mod stats;

pub use error::{Error, Result};
