//! Reading point clouds, generating samples, and writing every output
//! format: tiling JSON, Hilbert CSV, barcode text and PGM images.

mod generate;
mod points;
mod tables;
mod tiling_json;

use std::path::PathBuf;

use thiserror::Error;

use crate::geom::GeomError;
use crate::tiling::TilingError;

pub use generate::{generate, GeneratorKind, GeneratorSpec};
pub use points::{parse_points, parse_points_str, write_points};
pub use tables::{barcode_text, hilbert_csv, hilbert_pgm, parse_barcode_text, parse_hilbert_csv};
pub use tiling_json::{parse_tiling_json, tiling_json};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid generator: {0}")]
    Generator(String),
}

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}
