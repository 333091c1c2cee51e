//! Batch vectorization: items.jsonl in, a flat file of encoded vector
//! records out, plus a JSONL manifest mapping item ids to byte ranges.
//!
//! Every record is a self-describing encoded vector, so a reader can
//! seek to `offset`, read `len` bytes, and decode without consulting
//! anything else. Records are emitted in input order and the encoding
//! has no timestamps, so reruns are byte-identical.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use bitgram_core::codec::{encode_bits, encode_float};
use bitgram_core::text::{ngrams, normalize};
use bitgram_core::{build_bit_vector, build_float_vector, HashConfig};

use crate::dataset::{read_to_string, write_atomic, Item};
use crate::experiment::Element;
use crate::AppError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestEntry {
    pub item_id: String,
    pub offset: u64,
    pub len: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorizeStats {
    pub records: usize,
    pub data_bytes: u64,
}

/// `<out>.manifest.jsonl` next to the data file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.jsonl");
    PathBuf::from(name)
}

/// Vectorizes every item in `items_path` and writes the record file and
/// its manifest. Unlike the evaluation loader, this is an export: any
/// malformed line or duplicate item id fails the whole run rather than
/// shrinking the output.
pub fn vectorize_items(
    items_path: &Path,
    element: Element,
    hash: &HashConfig,
    ngram: usize,
    out: &Path,
) -> Result<VectorizeStats, AppError> {
    if ngram == 0 {
        return Err(AppError::Config("ngram must be at least 1".into()));
    }
    if hash.dim == 0 {
        return Err(AppError::Config("dim must be at least 1".into()));
    }

    let text = read_to_string(items_path)?;
    let mut items: Vec<Item> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let item: Item = serde_json::from_str(line).map_err(|e| {
            AppError::Data(format!("{}:{}: bad item: {e}", items_path.display(), line_no + 1))
        })?;
        items.push(item);
    }
    if items.is_empty() {
        return Err(AppError::Data(format!("{}: no items", items_path.display())));
    }

    let mut seen = std::collections::HashSet::new();
    let mut duplicates: Vec<&str> = Vec::new();
    for item in &items {
        if !seen.insert(item.item_id.as_str()) {
            duplicates.push(&item.item_id);
        }
    }
    if !duplicates.is_empty() {
        duplicates.sort_unstable();
        duplicates.dedup();
        return Err(AppError::Data(format!("duplicate item ids: {}", duplicates.join(", "))));
    }

    let mut data: Vec<u8> = Vec::new();
    let mut manifest = String::new();
    for item in &items {
        let normalized = normalize(&item.title);
        let grams = ngrams(&normalized, ngram).map_err(|e| AppError::Config(e.to_string()))?;
        let record = match element {
            Element::Float => encode_float(&build_float_vector(&grams, hash)),
            Element::Bit => encode_bits(&build_bit_vector(&grams, hash)),
        };
        let entry = ManifestEntry {
            item_id: item.item_id.clone(),
            offset: data.len() as u64,
            len: record.len() as u64,
        };
        data.extend_from_slice(&record);
        manifest.push_str(&serde_json::to_string(&entry).expect("manifest entry serializes"));
        manifest.push('\n');
    }

    write_atomic(out, &data)?;
    write_atomic(&manifest_path(out), manifest.as_bytes())?;
    Ok(VectorizeStats { records: items.len(), data_bytes: data.len() as u64 })
}
