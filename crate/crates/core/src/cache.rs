//! Persistent content-addressed store of computed classes.
//!
//! Each entry is one file named by the SHA-256 of its key. Files embed the
//! class format version and the key; a mismatch on either counts as a miss.
//! Writes go through a temporary file in the same directory and a rename.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format::{class_from_json, class_to_json, FORMAT_VERSION};
use crate::strata::TautClass;
use crate::{Error, Result};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "TAUTRING_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct ClassCache {
    dir: PathBuf,
}

impl ClassCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| Error::Io { op: "open", source })?;
        Ok(ClassCache { dir })
    }

    /// The directory from [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Ok(Some(Self::open(PathBuf::from(d))?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    pub fn get(&self, key: &str) -> Option<TautClass> {
        let text = std::fs::read_to_string(self.path_for(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("version").and_then(Value::as_u64) != Some(FORMAT_VERSION as u64) {
            return None;
        }
        if v.get("key").and_then(Value::as_str) != Some(key) {
            return None;
        }
        class_from_json(v.get("class")?).ok()
    }

    pub fn put(&self, key: &str, class: &TautClass) -> Result<PathBuf> {
        let doc = json!({ "version": FORMAT_VERSION, "key": key, "class": class_to_json(class) });
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
        let path = self.path_for(key);
        let io = |source| Error::Io { op: "put", source };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(text.as_bytes()).map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }
}
