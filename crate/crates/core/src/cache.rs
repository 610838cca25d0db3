//! Write-once memo table shared by the evaluators, with JSON Lines
//! persistence.
//!
//! File layout: a header line `{"format":"psi-cache","version":1}` followed
//! by one `{"g":..,"d":[..],"v":"p/q"}` line per entry, sorted by key.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{RwLock, RwLockReadGuard, RwLockWriteGuard};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::key::CorrelatorKey;
use crate::Rational;

pub const FORMAT_NAME: &str = "psi-cache";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    g: u32,
    d: Vec<u32>,
    v: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

#[derive(Debug, Default)]
pub struct CacheStore {
    entries: RwLock<HashMap<CorrelatorKey, Rational>>,
    dirty: AtomicBool,
    source: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl CacheStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn read(&self) -> RwLockReadGuard<'_, HashMap<CorrelatorKey, Rational>> {
        self.entries.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, HashMap<CorrelatorKey, Rational>> {
        self.entries.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn get(&self, key: &CorrelatorKey) -> Option<Rational> {
        self.read().get(key).cloned()
    }

    pub fn len(&self) -> usize {
        self.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.read().is_empty()
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty.load(Ordering::Relaxed)
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    /// Insert-if-absent. Re-inserting an equal value is a no-op; a different
    /// value is a [`Error::Conflict`].
    pub fn insert(&self, key: CorrelatorKey, value: Rational) -> Result<()> {
        if key.is_trivially_zero() {
            if value.is_zero() {
                return Ok(());
            }
            return Err(Error::Conflict { key, existing: Box::default(), computed: Box::new(value) });
        }
        let mut map = self.write();
        match map.get(&key) {
            Some(existing) if *existing == value => Ok(()),
            Some(existing) => Err(Error::Conflict {
                existing: Box::new(existing.clone()),
                key,
                computed: Box::new(value),
            }),
            None => {
                map.insert(key, value);
                self.dirty.store(true, Ordering::Relaxed);
                Ok(())
            }
        }
    }

    /// Returns the cached value, or runs `evaluator` (with no lock held) and
    /// stores its result. Concurrent misses on the same key may both
    /// evaluate; the first insert wins and the second must agree with it.
    pub fn get_or_compute<F>(&self, key: &CorrelatorKey, evaluator: F) -> Result<Rational>
    where
        F: FnOnce(&CorrelatorKey) -> Result<Rational>,
    {
        if let Some(v) = self.get(key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let value = evaluator(key)?;
        self.insert(key.clone(), value.clone())?;
        Ok(value)
    }

    /// Entries sorted by key.
    pub fn entries(&self) -> Vec<(CorrelatorKey, Rational)> {
        let mut out: Vec<_> = self.read().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Merges every entry of `other` into `self`; stops at the first
    /// conflict. Returns the number of entries that were new.
    pub fn merge(&self, other: &CacheStore) -> Result<usize> {
        let before = self.len();
        for (k, v) in other.entries() {
            self.insert(k, v)?;
        }
        Ok(self.len() - before)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header { format: FORMAT_NAME.into(), version: FORMAT_VERSION };
        writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes"))?;
        for (key, value) in self.entries() {
            let record = EntryRecord {
                g: key.genus(),
                d: key.indices().to_vec(),
                v: format_rational(&value),
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("record serializes"))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Callers must make sure no inserts run concurrently with a save.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = File::create(path.as_ref())?;
        self.write_to(BufWriter::new(file))?;
        self.dirty.store(false, Ordering::Relaxed);
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let store = Self::new();
        store.merge_from_reader(input)?;
        store.dirty.store(false, Ordering::Relaxed);
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut store = Self::read_from(File::open(path)?)?;
        store.source = Some(path.to_path_buf());
        Ok(store)
    }

    /// Reads a cache file and inserts its entries; conflicts abort.
    pub fn merge_from_reader<R: Read>(&self, input: R) -> Result<usize> {
        let parsed = parse_lines(BufReader::new(input))?;
        let before = self.len();
        for (key, value) in parsed {
            self.insert(key, value)?;
        }
        Ok(self.len() - before)
    }

    pub fn merge_file(&self, path: impl AsRef<Path>) -> Result<usize> {
        self.merge_from_reader(File::open(path.as_ref())?)
    }
}

fn parse_lines<R: BufRead>(reader: R) -> Result<Vec<(CorrelatorKey, Rational)>> {
    let mut lines = reader.lines();
    let header_line = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::UnsupportedFormat("empty cache file".into())),
    };
    let header: Header = serde_json::from_str(&header_line)
        .map_err(|_| Error::UnsupportedFormat("missing psi-cache header line".into()))?;
    if header.format != FORMAT_NAME {
        return Err(Error::UnsupportedFormat(format!("unknown format {:?}", header.format)));
    }
    if header.version != FORMAT_VERSION {
        return Err(Error::UnsupportedFormat(format!(
            "version {} (expected {FORMAT_VERSION})",
            header.version
        )));
    }

    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        let record: EntryRecord =
            serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        let key = CorrelatorKey::new(record.g, record.d.clone())
            .map_err(|e| parse_err(e.to_string()))?;
        if key.indices() != record.d.as_slice() {
            log::warn!("line {line_no}: index list {:?} normalized to {:?}", record.d, key.indices());
        }
        let value = parse_rational(&record.v).map_err(|e| parse_err(e.to_string()))?;
        out.push((key, value));
    }
    Ok(out)
}
