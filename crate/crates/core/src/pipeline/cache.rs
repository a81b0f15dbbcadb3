//! Content-addressed store of intermediate results.
//!
//! Entries live at `<dir>/<sha256(operation, inputs, precision)>.json`.
//! Deleting the directory is always safe.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: Some(dir.to_path_buf()),
        })
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn key(operation: &str, inputs: &impl Serialize, precision: u32) -> Result<String> {
        let mut h = Sha256::new();
        h.update(operation.as_bytes());
        h.update([0u8]);
        h.update(serde_json::to_vec(inputs)?);
        h.update([0u8]);
        h.update(precision.to_le_bytes());
        Ok(hex::encode(h.finalize()))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let bytes = fs::read(self.path(key)?).ok()?;
        // unreadable entries are treated as misses
        serde_json::from_slice(&bytes).ok()
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        if let Some(p) = self.path(key) {
            let tmp = p.with_extension("tmp");
            fs::write(&tmp, serde_json::to_vec(value)?)?;
            fs::rename(tmp, p)?;
        }
        Ok(())
    }

    /// Returns the cached value or computes and stores it.
    pub fn get_or_compute<T, F>(&self, operation: &str, inputs: &impl Serialize, precision: u32, f: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if !self.is_enabled() {
            return f();
        }
        let key = Self::key(operation, inputs, precision)?;
        if let Some(v) = self.get(&key) {
            return Ok(v);
        }
        let v = f()?;
        self.put(&key, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_depend_on_everything() {
        let a = Cache::key("bd", &(1, 2), 512).unwrap();
        assert_eq!(a, Cache::key("bd", &(1, 2), 512).unwrap());
        assert_ne!(a, Cache::key("bd", &(1, 3), 512).unwrap());
        assert_ne!(a, Cache::key("bd", &(1, 2), 1024).unwrap());
        assert_ne!(a, Cache::key("lll", &(1, 2), 512).unwrap());
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn roundtrip_and_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::at(dir.path()).unwrap();
        let mut calls = 0;
        let v: Vec<u64> = c
            .get_or_compute("op", &"x", 64, || {
                calls += 1;
                Ok(vec![1, 2])
            })
            .unwrap();
        let w: Vec<u64> = c
            .get_or_compute("op", &"x", 64, || {
                calls += 1;
                Ok(vec![9])
            })
            .unwrap();
        assert_eq!(v, w);
        assert_eq!(calls, 1);
    }
}
