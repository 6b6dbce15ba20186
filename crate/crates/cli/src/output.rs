//! Report envelope, input loading and file output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use isofusion::algebra::{parse_tensor_text, with_detected_star, BasedAlgebra};
use isofusion::scheme::{algebra_from_relations, parse_relation_matrix, RelationMatrix};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::args::InputArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid {what} `{text}`: {reason}")]
    Argument {
        what: &'static str,
        text: String,
        reason: String,
    },
    #[error(transparent)]
    Core(#[from] isofusion::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn argument(what: &'static str, text: &str, reason: impl ToString) -> CliError {
    CliError::Argument {
        what,
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Common wrapper of every JSON report.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: &'a [String],
    pub inputs: &'a [InputRecord],
    pub result: &'a T,
}

pub fn read_input(path: &Path) -> CliResult<(String, InputRecord)> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let hash = Sha256::digest(&bytes);
    let sha256 = hash.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    let text = String::from_utf8(bytes)
        .map_err(|e| argument("input file", &path.display().to_string(), e))?;
    Ok((
        text,
        InputRecord {
            path: path.display().to_string(),
            sha256,
        },
    ))
}

pub struct Loaded {
    pub algebra: BasedAlgebra,
    /// The relation matrix, for scheme inputs.
    pub matrix: Option<RelationMatrix>,
    pub record: InputRecord,
}

/// Reads the scheme or tensor named by `input`. A tensor without a `star`
/// line gets its involution detected when it has one.
pub fn load(input: &InputArgs) -> CliResult<Loaded> {
    match (&input.scheme, &input.tensor) {
        (Some(path), _) => {
            let (text, record) = read_input(path)?;
            let matrix = parse_relation_matrix(&text)?;
            let algebra = algebra_from_relations(&matrix)?;
            Ok(Loaded {
                algebra,
                matrix: Some(matrix),
                record,
            })
        }
        (None, Some(path)) => {
            let (text, record) = read_input(path)?;
            let mut algebra = parse_tensor_text(&text, false)?;
            if algebra.star().is_none() {
                if let Ok(detected) = with_detected_star(algebra.clone()) {
                    algebra = detected;
                }
            }
            Ok(Loaded {
                algebra,
                matrix: None,
                record,
            })
        }
        (None, None) => unreachable!("clap requires one input"),
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes the enveloped report as pretty JSON followed by a newline.
pub fn write_report<T: Serialize>(
    path: Option<&Path>,
    command_line: &[String],
    inputs: &[InputRecord],
    result: &T,
) -> CliResult<()> {
    let envelope = Envelope {
        tool: "isofusion",
        version: env!("CARGO_PKG_VERSION"),
        command_line,
        inputs,
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report serializes");
    text.push('\n');
    write_text(path, &text)
}
