//! On-disk cache for oracle results.
//!
//! One JSON file per key, named by the SHA-256 of the key. Writes go through a temporary
//! file and a rename, so concurrent writers of the same value are harmless.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::report::KERNEL_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub graph: String,
    pub m: u32,
    pub characteristic: u32,
    pub order: String,
    pub kind: String,
}

impl CacheKey {
    fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("keys serialize");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub kernel_version: String,
    pub value: serde_json::Value,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub audits: usize,
    pub audit_failures: usize,
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    /// Probability that a hit is recomputed and compared.
    pub audit_rate: f64,
    hits: AtomicUsize,
    misses: AtomicUsize,
    audits: AtomicUsize,
    audit_failures: AtomicUsize,
}

impl Cache {
    pub const DEFAULT_AUDIT_RATE: f64 = 0.05;

    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Cache {
            dir,
            audit_rate: Self::DEFAULT_AUDIT_RATE,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
            audits: AtomicUsize::new(0),
            audit_failures: AtomicUsize::new(0),
        })
    }

    pub fn with_audit_rate(mut self, rate: f64) -> Self {
        self.audit_rate = rate;
        self
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            audits: self.audits.load(Ordering::Relaxed),
            audit_failures: self.audit_failures.load(Ordering::Relaxed),
        }
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// A stored entry for this key and kernel version.
    pub fn lookup(&self, key: &CacheKey) -> Option<serde_json::Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == *key && entry.kernel_version == KERNEL_VERSION).then_some(entry.value)
    }

    pub fn store(&self, key: &CacheKey, value: serde_json::Value) -> Result<()> {
        let entry = CacheEntry { key: key.clone(), kernel_version: KERNEL_VERSION.into(), value };
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", rand::thread_rng().gen::<u64>()));
        fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Cached value, or `compute` stored on a miss. A sampled hit is recomputed; on a mismatch
    /// the fresh value replaces the entry and is returned.
    pub fn get_or_compute<T>(&self, key: &CacheKey, compute: impl Fn() -> Result<T>) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(stored) = self.lookup(key) {
            if let Ok(v) = serde_json::from_value::<T>(stored.clone()) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                if rand::thread_rng().gen_bool(self.audit_rate.clamp(0.0, 1.0)) {
                    self.audits.fetch_add(1, Ordering::Relaxed);
                    let fresh = compute()?;
                    let fresh_json = serde_json::to_value(&fresh)?;
                    if fresh_json != stored {
                        self.audit_failures.fetch_add(1, Ordering::Relaxed);
                        eprintln!("cache audit failed for {key:?}; replacing the stored value");
                        self.store(key, fresh_json)?;
                        return Ok(fresh);
                    }
                }
                return Ok(v);
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let fresh = compute()?;
        self.store(key, serde_json::to_value(&fresh)?)?;
        Ok(fresh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(kind: &str) -> CacheKey {
        CacheKey { graph: "V:1,2;E:(1,2)".into(), m: 2, characteristic: 32003, order: "degrevlex".into(), kind: kind.into() }
    }

    #[test]
    fn round_trip_and_audit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap().with_audit_rate(1.0);
        let v: Result<u32> = cache.get_or_compute(&key("dim"), || Ok(3));
        assert_eq!(v.unwrap(), 3);
        let v: Result<u32> = cache.get_or_compute(&key("dim"), || Ok(3));
        assert_eq!(v.unwrap(), 3);
        assert_eq!(cache.stats(), CacheStats { hits: 1, misses: 1, audits: 1, audit_failures: 0 });
        // A corrupted entry is caught by the audit and replaced.
        cache.store(&key("dim"), serde_json::json!(4)).unwrap();
        let v: Result<u32> = cache.get_or_compute(&key("dim"), || Ok(3));
        assert_eq!(v.unwrap(), 3);
        assert_eq!(cache.stats().audit_failures, 1);
        assert_eq!(cache.lookup(&key("dim")), Some(serde_json::json!(3)));
    }

    #[test]
    fn keys_are_distinct() {
        assert_ne!(key("dim").digest(), key("betti").digest());
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert_eq!(cache.lookup(&key("dim")), None);
    }
}
