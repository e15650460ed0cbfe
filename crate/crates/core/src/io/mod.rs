//! Layout documents, drawings and Pareto tables.

pub mod document;
pub mod outline;
pub mod pareto;
pub mod svg;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use document::{read_layout, write_layout, LayoutDocument};
pub use pareto::{merge_fronts, write_pareto_csv};
pub use svg::render_svg;

/// Pretty JSON with sorted keys and shortest round-trip floats, newline-terminated.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    // serde_json::Value keeps object keys in a BTreeMap, which sorts them
    let v = serde_json::to_value(value)?;
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
