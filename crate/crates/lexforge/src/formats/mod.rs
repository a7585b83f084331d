//! On-disk formats. Text formats are UTF-8 with LF line endings; binary
//! formats are little-endian.

pub mod corpus;
pub mod lexicon;
pub mod model;
pub mod vocab;

use std::fs;
use std::path::Path;

use crate::error::{LexError, Result};

/// Reads a whole text file, reporting the first line that is not UTF-8.
pub(crate) fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => LexError::MissingInput(path.to_path_buf()),
        _ => LexError::io(path, e),
    })?;
    String::from_utf8(bytes).map_err(|e| {
        let valid = e.utf8_error().valid_up_to();
        let line = e.as_bytes()[..valid].iter().filter(|&&b| b == b'\n').count() + 1;
        LexError::Encoding { path: path.to_path_buf(), line }
    })
}

/// Reads a file that an earlier pipeline step should have produced.
pub(crate) fn read_artifact(path: &Path, step: &'static str) -> Result<String> {
    if !path.exists() {
        return Err(LexError::MissingArtifact { path: path.to_path_buf(), step });
    }
    read_text(path)
}

pub(crate) fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| LexError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| LexError::io(path, e))
}

/// Parses a float field, naming the line on failure.
pub(crate) fn parse_f64(path: &Path, line: usize, field: &str, what: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| LexError::parse(path, line, format!("{what}: {field:?} is not a number")))
}
