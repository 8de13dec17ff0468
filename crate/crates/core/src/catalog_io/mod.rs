//! Built-in device catalog and the on-disk descriptor and coding-state formats.

mod builtin;
mod files;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::dynamic_power::StateError;
use crate::hardware_model::ValidationErrors;

pub use builtin::{builtin, builtin_entry, entries, CatalogEntry, BUILTIN_KEYS};
pub use files::{
    descriptor_from_json, descriptor_to_json, load_descriptor, load_descriptor_with, load_states,
    save_descriptor, save_states, states_from_json, states_to_json, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog key {0:?} (expected one of: pin-16x16, varactor-8x16, rfswitch-8x8)")]
    UnknownKey(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
    #[error("unsupported schema_version {0} (this build reads version 1)")]
    UnsupportedVersion(u64),
    #[error("{0}")]
    Validation(#[from] ValidationErrors),
    #[error("segments[{segment}]: {source}")]
    State {
        segment: usize,
        #[source]
        source: StateError,
    },
}

impl CatalogError {
    /// True for failures of the file system rather than of the content.
    pub fn is_io(&self) -> bool {
        matches!(self, CatalogError::Io { .. })
    }
}
