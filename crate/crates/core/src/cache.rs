//! On-disk store for irreducible pair products.
//!
//! Entries are content-addressed by family fingerprint and label pair and
//! written with write-then-rename, so concurrent processes never observe a
//! partial file. Unreadable or mismatching entries count as misses. An I/O
//! failure on write disables the store for the rest of the process; the
//! in-memory memo keeps working.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::semiring::FamilyId;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "FUSION_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    a: String,
    b: String,
    terms: Vec<(String, String)>,
}

#[derive(Debug)]
pub struct PairStore {
    root: PathBuf,
    disabled: AtomicBool,
}

impl PairStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        PairStore { root: root.into(), disabled: AtomicBool::new(false) }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn is_disabled(&self) -> bool {
        self.disabled.load(Ordering::Relaxed)
    }

    fn entry_path(&self, family: FamilyId, a: &str, b: &str) -> PathBuf {
        let mut hasher = Sha256::new();
        hasher.update(a.as_bytes());
        hasher.update([0u8]);
        hasher.update(b.as_bytes());
        let key = hex::encode(hasher.finalize());
        self.root.join(family.to_string()).join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn lookup(&self, family: FamilyId, a: &str, b: &str) -> Option<Vec<(String, String)>> {
        if self.is_disabled() {
            return None;
        }
        let bytes = fs::read(self.entry_path(family, a, b)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        (entry.a == a && entry.b == b).then_some(entry.terms)
    }

    pub fn store(&self, family: FamilyId, a: &str, b: &str, terms: &[(String, String)]) {
        if self.is_disabled() {
            return;
        }
        let path = self.entry_path(family, a, b);
        let entry = Entry { a: a.to_string(), b: b.to_string(), terms: terms.to_vec() };
        if let Err(err) = write_atomic(&path, &entry) {
            log::warn!("pair cache disabled after write failure at {}: {err}", path.display());
            self.disabled.store(true, Ordering::Relaxed);
        }
    }
}

fn write_atomic(path: &Path, entry: &Entry) -> std::io::Result<()> {
    let dir = path.parent().expect("entry path has a parent");
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&serde_json::to_vec(entry)?)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
