//! Census cache: cell-dimension multisets keyed by `(r, α, β, w, n)`,
//! kept in memory and optionally mirrored to a JSON-lines file.
//!
//! Every on-disk entry is checked before use (version tag, multiset length
//! against the fixed-point count, sortedness); anything else is dropped and
//! the file is rewritten. Writes go to a temporary file that is renamed
//! over the original.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::census::{fixed_point_count, Cocharacter, DimensionStore};

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CacheKey {
    pub r: usize,
    pub alpha: i64,
    pub beta: i64,
    pub w: Vec<i64>,
    pub n: u32,
}

impl CacheKey {
    pub fn new(c: &Cocharacter, n: u32) -> Self {
        Self { r: c.rank(), alpha: c.alpha(), beta: c.beta(), w: c.w().to_vec(), n }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    version: u32,
    key: CacheKey,
    dims: Vec<u32>,
}

fn valid(entry: &CacheEntry, version: u32) -> bool {
    entry.version == version
        && entry.key.w.len() == entry.key.r
        && entry.dims.len() as u64 == fixed_point_count(entry.key.r, entry.key.n)
        && entry.dims.windows(2).all(|w| w[0] <= w[1])
}

#[derive(Debug, Default)]
pub struct CensusCache {
    path: Mutex<Option<PathBuf>>,
    version: u32,
    memory: Mutex<HashMap<CacheKey, Vec<u32>>>,
    key_locks: Mutex<HashMap<CacheKey, Arc<Mutex<()>>>>,
    file: Mutex<()>,
}

impl CensusCache {
    /// Memory only.
    pub fn in_memory() -> Self {
        Self { version: CACHE_VERSION, ..Self::default() }
    }

    pub fn open(path: &Path) -> Self {
        Self::open_versioned(path, CACHE_VERSION)
    }

    /// Loads valid entries from `path`; repairs the file if any line was
    /// dropped. Failures only produce warnings.
    pub fn open_versioned(path: &Path, version: u32) -> Self {
        let cache = Self { path: Mutex::new(Some(path.to_path_buf())), version, ..Self::default() };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return cache,
            Err(e) => {
                eprintln!("warning: cannot read cache {}: {e}; using memory only", path.display());
                *cache.path.lock().unwrap() = None;
                return cache;
            }
        };
        let mut dropped = 0;
        {
            let mut memory = cache.memory.lock().unwrap();
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                match serde_json::from_str::<CacheEntry>(line) {
                    Ok(e) if valid(&e, version) => {
                        memory.insert(e.key, e.dims);
                    }
                    _ => dropped += 1,
                }
            }
        }
        if dropped > 0 {
            eprintln!("warning: dropped {dropped} invalid cache entries from {}", path.display());
            cache.flush();
        }
        cache
    }

    pub fn path(&self) -> Option<PathBuf> {
        self.path.lock().unwrap().clone()
    }

    pub fn len(&self) -> usize {
        self.memory.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &CacheKey) -> Option<Vec<u32>> {
        self.memory.lock().unwrap().get(key).cloned()
    }

    fn key_lock(&self, key: &CacheKey) -> Arc<Mutex<()>> {
        self.key_locks.lock().unwrap().entry(key.clone()).or_default().clone()
    }

    /// Rewrites the file from memory, sorted by key.
    fn flush(&self) {
        let _guard = self.file.lock().unwrap();
        let Some(path) = self.path() else { return };
        let mut entries: Vec<(CacheKey, Vec<u32>)> =
            self.memory.lock().unwrap().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        entries.sort();
        let mut body = String::new();
        for (key, dims) in entries {
            let line = serde_json::to_string(&CacheEntry { version: self.version, key, dims }).expect("entry serializes");
            body.push_str(&line);
            body.push('\n');
        }
        if let Err(e) = write_atomic(&path, body.as_bytes()) {
            eprintln!("warning: cannot write cache {}: {e}; continuing in memory", path.display());
            *self.path.lock().unwrap() = None;
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

impl DimensionStore for CensusCache {
    fn get_or_compute(&self, c: &Cocharacter, n: u32, compute: &(dyn Fn() -> Vec<u32> + Sync)) -> Vec<u32> {
        let key = CacheKey::new(c, n);
        let lock = self.key_lock(&key);
        let _held = lock.lock().unwrap();
        if let Some(v) = self.get(&key) {
            return v;
        }
        let dims = compute();
        self.memory.lock().unwrap().insert(key, dims.clone());
        self.flush();
        dims
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::dimension_multiset;

    fn fetch(cache: &CensusCache, c: &Cocharacter, n: u32) -> Vec<u32> {
        cache.get_or_compute(c, n, &|| dimension_multiset(c, n))
    }

    #[test]
    fn cold_miss_then_warm_hit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let c = Cocharacter::ow(2, 1).unwrap();
        let cold = fetch(&CensusCache::open(&path), &c, 4);
        let warm = CensusCache::open(&path);
        assert_eq!(warm.len(), 1);
        let hit = warm.get_or_compute(&c, 4, &|| panic!("should be cached"));
        assert_eq!(cold, hit);
        assert_eq!(hit, dimension_multiset(&c, 4));
    }

    #[test]
    fn version_bump_invalidates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let c = Cocharacter::ow(1, 0).unwrap();
        fetch(&CensusCache::open_versioned(&path, 1), &c, 3);
        assert!(CensusCache::open_versioned(&path, 2).is_empty());
        assert!(fs::read_to_string(&path).unwrap().is_empty());
    }

    #[test]
    fn corrupted_lines_are_recomputed_and_repaired() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let c = Cocharacter::ow(2, 0).unwrap();
        let cache = CensusCache::open(&path);
        fetch(&cache, &c, 2);
        fetch(&cache, &c, 3);
        let text = fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        let lying = first.replace("\"dims\":[", "\"dims\":[0,");
        fs::write(&path, format!("{lying}\n{{not json\n{}\n", text.lines().nth(1).unwrap())).unwrap();
        let reopened = CensusCache::open(&path);
        assert_eq!(reopened.len(), 1);
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1);
        assert_eq!(fetch(&reopened, &c, 2), dimension_multiset(&c, 2));
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn unwritable_path_degrades_to_memory() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("cache.jsonl");
        let cache = CensusCache::open(&path);
        let c = Cocharacter::ow(1, 1).unwrap();
        assert_eq!(fetch(&cache, &c, 3), dimension_multiset(&c, 3));
        assert!(cache.path().is_none());
        assert_eq!(cache.len(), 1);
    }
}
