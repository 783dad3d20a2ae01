//! Instance files: one problem per JSON file, rationals always written as
//! canonical strings ("a" or "a/b" in lowest terms), unknown fields
//! rejected. Omitted frame and weights default to the identity frame and
//! all-zero weights.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use padic_lattice::{
    format_rat, parse_rat, rat, LatticeBasis, Matrix, NormValue, NormedSpace, Rat, Vector,
};

use crate::error::{from_core, CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub p: u64,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    pub basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
}

/// Ground-truth sidecar written next to generated instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthFile {
    /// Successive maxima as norm strings ("p^e").
    pub maxima: Vec<String>,
    /// Escape distance; absent when the lattice is not full rank.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    /// Ladder prefix as norm strings.
    pub ladder: Vec<String>,
    /// A known orthogonal basis of the same lattice.
    pub orthogonal: Vec<Vec<String>>,
}

/// A parsed and validated instance, plus the digest of its raw bytes.
pub struct LoadedInstance {
    pub space: Arc<NormedSpace>,
    pub basis: LatticeBasis,
    pub target: Option<Vector>,
    pub digest: String,
}

pub fn digest_of(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{}", hex::encode(hasher.finalize()))
}

fn parse_entry(context: &str, s: &str) -> CliResult<Rat> {
    parse_rat(s).map_err(|e| CliError::input(format!("{context}: {e}")))
}

fn parse_vector(context: &str, entries: &[String], dim: usize) -> CliResult<Vector> {
    if entries.len() != dim {
        return Err(CliError::input(format!(
            "{context}: expected {dim} entries, got {}",
            entries.len()
        )));
    }
    let parsed = entries
        .iter()
        .enumerate()
        .map(|(j, s)| parse_entry(&format!("{context}[{j}]"), s))
        .collect::<CliResult<Vec<Rat>>>()?;
    Ok(Vector::new(parsed))
}

/// Realizes the schema into library objects, validating as it goes.
pub fn realize(file: &InstanceFile) -> CliResult<(Arc<NormedSpace>, LatticeBasis, Option<Vector>)> {
    let dim = file.dim;
    if dim == 0 {
        return Err(CliError::input("dim must be positive"));
    }

    let frame = match &file.frame {
        None => Matrix::identity(dim),
        Some(rows) => {
            if rows.len() != dim {
                return Err(CliError::input(format!(
                    "frame: expected {dim} rows, got {}",
                    rows.len()
                )));
            }
            let vectors = rows
                .iter()
                .enumerate()
                .map(|(i, row)| parse_vector(&format!("frame[{i}]"), row, dim))
                .collect::<CliResult<Vec<Vector>>>()?;
            Matrix::from_rows(vectors).map_err(from_core)?
        }
    };

    let weights = match &file.weights {
        None => vec![rat(0); dim],
        Some(entries) => {
            if entries.len() != dim {
                return Err(CliError::input(format!(
                    "weights: expected {dim} entries, got {}",
                    entries.len()
                )));
            }
            entries
                .iter()
                .enumerate()
                .map(|(j, s)| parse_entry(&format!("weights[{j}]"), s))
                .collect::<CliResult<Vec<Rat>>>()?
        }
    };

    let space = Arc::new(
        NormedSpace::new(file.p, frame, weights).map_err(|e| match e {
            // A singular frame is a precondition failure, the rest of the
            // space parameters are plain input validation.
            padic_lattice::Error::SingularFrame => from_core(e),
            other => CliError::input(other.to_string()),
        })?,
    );

    if file.basis.is_empty() {
        return Err(CliError::input("basis: at least one row is required"));
    }
    let rows = file
        .basis
        .iter()
        .enumerate()
        .map(|(i, row)| parse_vector(&format!("basis[{i}]"), row, dim))
        .collect::<CliResult<Vec<Vector>>>()?;
    let basis = LatticeBasis::new(space.clone(), rows).map_err(from_core)?;

    let target = match &file.target {
        None => None,
        Some(entries) => Some(parse_vector("target", entries, dim)?),
    };

    Ok((space, basis, target))
}

fn parse_error(path: &Path, e: &serde_json::Error) -> CliError {
    // serde_json repeats the location inside its message; keep one copy.
    let msg = e.to_string();
    let msg = msg.split(" at line ").next().unwrap_or(&msg);
    CliError::input(format!(
        "{}: parse error at line {}, column {}: {msg}",
        path.display(),
        e.line(),
        e.column()
    ))
}

pub fn load(path: &Path) -> CliResult<LoadedInstance> {
    let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::input(format!("{}: not valid UTF-8: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| parse_error(path, &e))?;
    let (space, basis, target) = realize(&file)?;
    Ok(LoadedInstance {
        space,
        basis,
        target,
        digest: digest_of(&bytes),
    })
}

/// Canonical bytes of an instance or truth file: pretty JSON plus a trailing
/// newline, so equal values serialize byte-identically.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<String> {
    let text = to_canonical_json(value);
    fs::write(path, &text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

pub fn load_truth(path: &Path) -> CliResult<TruthFile> {
    let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::input(format!("{}: not valid UTF-8: {e}", path.display())))?;
    serde_json::from_str(text).map_err(|e| parse_error(path, &e))
}

pub fn format_vector_strings(v: &Vector) -> Vec<String> {
    v.entries().iter().map(format_rat).collect()
}

pub fn format_norms(norms: &[NormValue], p: u64) -> Vec<String> {
    norms.iter().map(|n| n.display(p)).collect()
}
