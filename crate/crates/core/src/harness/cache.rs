//! Memoised coverage tables, stored under `$INVGEN_CACHE_DIR` and keyed by
//! the SHA-256 of the canonical group serialisation.

use crate::error::Result;
use crate::group::{canonical_json, Group};
use crate::invariable::{CachedTable, ClassCoverageTable};
use sha2::{Digest, Sha256};
use std::path::PathBuf;

pub const CACHE_ENV: &str = "INVGEN_CACHE_DIR";

pub fn cache_key(g: &Group) -> String {
    format!("{:x}", Sha256::digest(canonical_json(g).as_bytes()))
}

fn cache_path(g: &Group) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("{}.json", cache_key(g))))
}

/// The coverage table of `g`, read from or written to the cache when the
/// environment variable is set. Unreadable cache entries are recomputed.
pub fn coverage_table_cached(g: &Group) -> Result<ClassCoverageTable> {
    let Some(path) = cache_path(g) else {
        return ClassCoverageTable::new(g);
    };
    if let Ok(bytes) = std::fs::read(&path) {
        if let Ok(cached) = serde_json::from_slice::<CachedTable>(&bytes) {
            if let Ok(t) = ClassCoverageTable::from_cached(g, &cached) {
                return Ok(t);
            }
        }
    }
    let table = ClassCoverageTable::new(g)?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec(&table.to_cached(g))?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(table)
}
