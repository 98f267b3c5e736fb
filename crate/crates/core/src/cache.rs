//! Persistent memo table for partial zeta values keyed by
//! "(D|modulus|class|s)".  The cache never changes results: entries are
//! exact rationals and a version mismatch discards the file.

use crate::Result;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

pub const CACHE_SCHEMA: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    schema: u32,
    entries: BTreeMap<String, String>,
}

/// Thread-safe in-memory cache with optional disk persistence.
pub struct LValueCache {
    entries: Mutex<BTreeMap<String, BigRational>>,
    hits: AtomicU64,
    path: Option<PathBuf>,
}

impl Default for LValueCache {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl LValueCache {
    pub fn in_memory() -> Self {
        LValueCache {
            entries: Mutex::new(BTreeMap::new()),
            hits: AtomicU64::new(0),
            path: None,
        }
    }

    /// Load from a file when present; missing or stale files start empty.
    pub fn with_file(path: &Path) -> Self {
        let mut entries = BTreeMap::new();
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(parsed) = serde_json::from_str::<CacheFile>(&text) {
                if parsed.schema == CACHE_SCHEMA {
                    for (k, v) in parsed.entries {
                        if let Ok(r) = crate::dirichlet::parse_rational(&v) {
                            entries.insert(k, r);
                        }
                    }
                }
            }
        }
        LValueCache {
            entries: Mutex::new(entries),
            hits: AtomicU64::new(0),
            path: Some(path.to_path_buf()),
        }
    }

    pub fn key(d: i128, modulus: &str, class_index: usize, s: i64) -> String {
        format!("({d}|{modulus}|{class_index}|{s})")
    }

    pub fn get(&self, key: &str) -> Option<BigRational> {
        let found = self.entries.lock().unwrap().get(key).cloned();
        if found.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        found
    }

    pub fn put(&self, key: String, value: BigRational) {
        self.entries.lock().unwrap().insert(key, value);
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Write back to the backing file, if any.
    pub fn persist(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let entries = self.entries.lock().unwrap();
        let file = CacheFile {
            schema: CACHE_SCHEMA,
            entries: entries
                .iter()
                .map(|(k, v)| (k.clone(), crate::dirichlet::rational_str(v)))
                .collect(),
        };
        let text = serde_json::to_string_pretty(&file).expect("cache serialization");
        std::fs::write(path, text)
            .map_err(|e| crate::Error::InvalidParameter(format!("cache write failed: {e}")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::frac;

    #[test]
    fn roundtrip() {
        let dir = std::env::temp_dir().join(format!("hq-cache-test-{}", std::process::id()));
        let _ = std::fs::create_dir_all(&dir);
        let path = dir.join("cache.json");
        let c = LValueCache::with_file(&path);
        let key = LValueCache::key(5, "[1, 0+1*w]", 0, -1);
        assert!(c.get(&key).is_none());
        c.put(key.clone(), frac(1, 30));
        c.persist().unwrap();
        let c2 = LValueCache::with_file(&path);
        assert_eq!(c2.get(&key), Some(frac(1, 30)));
        assert_eq!(c2.hits(), 1);
        let _ = std::fs::remove_file(&path);
    }
}
