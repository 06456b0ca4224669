use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use super::table::{ClassCountTable, DEFAULT_CEILING};
use crate::error::Result;

/// In-memory store of class-count tables, optionally backed by a directory
/// of text files (full-cycle tables only).
#[derive(Debug)]
pub struct TableCache {
    dir: Option<PathBuf>,
    threads: Option<usize>,
    ceiling: usize,
    memory: Mutex<HashMap<Vec<usize>, Arc<ClassCountTable>>>,
}

impl Default for TableCache {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl TableCache {
    pub fn in_memory() -> Self {
        Self { dir: None, threads: None, ceiling: DEFAULT_CEILING, memory: Mutex::new(HashMap::new()) }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()), ..Self::in_memory() }
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    pub fn ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn max_degree(&self) -> usize {
        self.ceiling
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Process-wide memory-only cache used by the free functions.
    pub fn global() -> &'static TableCache {
        static GLOBAL: OnceLock<TableCache> = OnceLock::new();
        GLOBAL.get_or_init(TableCache::in_memory)
    }

    pub fn path_for(dir: &Path, p: usize) -> PathBuf {
        dir.join(format!("classtable-p{p}.txt"))
    }

    /// Table for the full cycle of degree `p`; the flag reports a cache hit.
    pub fn full_cycle_table(&self, p: usize) -> Result<(Arc<ClassCountTable>, bool)> {
        self.table_for_cycle_type(&[p])
    }

    pub fn table_for_cycle_type(&self, cycle_type: &[usize]) -> Result<(Arc<ClassCountTable>, bool)> {
        let key = cycle_type.to_vec();
        if let Some(t) = self.memory.lock().expect("cache lock").get(&key) {
            return Ok((Arc::clone(t), true));
        }
        let full = cycle_type.len() == 1;
        if full {
            if let Some(t) = self.load(cycle_type[0])? {
                let t = Arc::new(t);
                self.memory.lock().expect("cache lock").insert(key, Arc::clone(&t));
                return Ok((t, true));
            }
        }
        let table = Arc::new(ClassCountTable::build_for_cycle_type(cycle_type, self.threads, self.ceiling)?);
        if full {
            self.store(&table)?;
        }
        let mut mem = self.memory.lock().expect("cache lock");
        let entry = mem.entry(key).or_insert_with(|| Arc::clone(&table));
        Ok((Arc::clone(entry), false))
    }

    fn load(&self, p: usize) -> Result<Option<ClassCountTable>> {
        let Some(dir) = &self.dir else { return Ok(None) };
        let path = Self::path_for(dir, p);
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(ClassCountTable::from_text(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file and a rename, so concurrent writers
    /// never expose a partial file; content is deterministic, so the last
    /// rename winning is harmless.
    fn store(&self, table: &ClassCountTable) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let path = Self::path_for(dir, table.p());
        let tmp = dir.join(format!(".classtable-p{}.{}.tmp", table.p(), std::process::id()));
        fs::write(&tmp, table.to_text()?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::with_dir(dir.path());
        let (built, hit) = cache.full_cycle_table(6).unwrap();
        assert!(!hit);
        let path = TableCache::path_for(dir.path(), 6);
        let on_disk = fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, built.to_text().unwrap());

        let fresh = TableCache::with_dir(dir.path());
        let (loaded, hit) = fresh.full_cycle_table(6).unwrap();
        assert!(hit);
        assert_eq!(*loaded, *built);

        let (_, hit) = fresh.full_cycle_table(6).unwrap();
        assert!(hit);
    }

    #[test]
    fn mixed_tables_stay_in_memory() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::with_dir(dir.path());
        let (_, hit) = cache.table_for_cycle_type(&[2, 2]).unwrap();
        assert!(!hit);
        assert!(cache.table_for_cycle_type(&[2, 2]).unwrap().1);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn corrupt_cache_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(TableCache::path_for(dir.path(), 3), "garbage\n").unwrap();
        assert!(TableCache::with_dir(dir.path()).full_cycle_table(3).is_err());
    }
}
