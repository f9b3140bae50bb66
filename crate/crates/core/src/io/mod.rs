//! Readers for terrain, road and scenario files; writers for strategies and
//! sweep tables.

pub mod ascii_grid;
pub mod export;
pub mod hgt;
pub mod road;
pub mod scenario;
pub mod sweep;

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
