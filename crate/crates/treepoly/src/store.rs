//! Append-only, level-partitioned record store.
//!
//! Layout of a store directory:
//!
//! ```text
//! meta                  format_version and the highest fully sealed level
//! level_<n>.psv         sealed records for n vertices, sorted by uid
//! level_<n>.manifest    record count, sealed flag, sha256 of the .psv file
//! level_<n>.psv.wal     records of a level still being built
//! ```
//!
//! Records of an open level are appended to its write-ahead file and kept in
//! memory. Sealing writes the sorted level file through a temporary name,
//! renames it into place and only then writes the manifest, so a level is
//! either sealed with consistent content or treated as absent.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use sha2::{Digest, Sha256};
use thiserror::Error;
use treepoly_core::{expected_tree_count, CanonicalCode, Polynomial, RecordError, TreeRecord};

use crate::format::{format_record, parse_record};

pub const FORMAT_VERSION: u32 = 1;

/// Levels above this are never stored.
pub const MAX_LEVEL: usize = 64;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: corrupt store: {reason}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("level {0} is sealed")]
    Sealed(usize),
    #[error("level {0} is beyond the store limit")]
    LevelTooLarge(usize),
    #[error("invalid record: {0}")]
    Invalid(#[from] RecordError),
    #[error("level {n}: {found} records, expected {expected}")]
    CountMismatch { n: usize, found: u64, expected: u64 },
    #[error("store format version {found} is not supported (expected {FORMAT_VERSION})")]
    Version { found: String },
}

type Result<T, E = StoreError> = std::result::Result<T, E>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelManifest {
    pub n: usize,
    pub record_count: u64,
    pub sealed: bool,
    /// Lowercase hex sha256 of the level file.
    pub checksum: String,
}

impl LevelManifest {
    fn render(&self) -> String {
        format!(
            "n={}\nrecord_count={}\nsealed={}\nchecksum=sha256:{}\n",
            self.n, self.record_count, self.sealed as u8, self.checksum
        )
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let kv = parse_kv(text, path)?;
        let field = |key: &str| {
            kv.get(key).cloned().ok_or_else(|| StoreError::Corrupt {
                path: path.to_path_buf(),
                line: 0,
                reason: format!("manifest lacks {key}"),
            })
        };
        let number = |key: &str| -> Result<u64> {
            field(key)?.parse().map_err(|_| StoreError::Corrupt {
                path: path.to_path_buf(),
                line: 0,
                reason: format!("manifest field {key} is not a number"),
            })
        };
        let checksum = field("checksum")?;
        Ok(LevelManifest {
            n: number("n")? as usize,
            record_count: number("record_count")?,
            sealed: number("sealed")? == 1,
            checksum: checksum
                .strip_prefix("sha256:")
                .unwrap_or(&checksum)
                .to_string(),
        })
    }
}

fn parse_kv(text: &str, path: &Path) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| StoreError::Corrupt {
            path: path.to_path_buf(),
            line: i + 1,
            reason: "expected key=value".into(),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

type PolyIndex = HashMap<CanonicalCode, Polynomial>;

struct OpenLevel {
    index: HashMap<CanonicalCode, usize>,
    records: Vec<TreeRecord>,
    wal: BufWriter<File>,
}

/// Handle to a store directory. Appends go through an internal lock, so a
/// shared `&Store` behaves as a single serialized writer; sealed levels are
/// read without locking.
pub struct Store {
    dir: PathBuf,
    open: Mutex<HashMap<usize, OpenLevel>>,
    sealed: Vec<AtomicBool>,
    sealed_polys: Vec<RwLock<Option<Arc<PolyIndex>>>>,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store")
            .field("dir", &self.dir)
            .finish_non_exhaustive()
    }
}

impl Store {
    /// Opens (creating if needed) the store at `dir`. Leftovers of levels
    /// that were never sealed are removed.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let store = Store {
            dir,
            open: Mutex::new(HashMap::new()),
            sealed: (0..=MAX_LEVEL).map(|_| AtomicBool::new(false)).collect(),
            sealed_polys: (0..=MAX_LEVEL).map(|_| RwLock::new(None)).collect(),
        };
        let meta = store.dir.join("meta");
        if meta.exists() {
            let text = fs::read_to_string(&meta).map_err(io_err(&meta))?;
            let kv = parse_kv(&text, &meta)?;
            let found = kv.get("format_version").cloned().unwrap_or_default();
            if found != FORMAT_VERSION.to_string() {
                return Err(StoreError::Version { found });
            }
        }
        for n in 0..=MAX_LEVEL {
            if store.manifest(n)?.is_some_and(|m| m.sealed) {
                store.sealed[n].store(true, Ordering::Release);
            } else {
                store.remove_level_files(n)?;
            }
        }
        store.write_meta()?;
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn level_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("level_{n}.psv"))
    }

    pub fn manifest_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("level_{n}.manifest"))
    }

    fn wal_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("level_{n}.psv.wal"))
    }

    fn lock(&self) -> MutexGuard<'_, HashMap<usize, OpenLevel>> {
        self.open
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn manifest(&self, n: usize) -> Result<Option<LevelManifest>> {
        let path = self.manifest_path(n);
        match fs::read_to_string(&path) {
            Ok(text) => LevelManifest::parse(&text, &path).map(Some),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    pub fn is_sealed(&self, n: usize) -> Result<bool> {
        Ok(self
            .sealed
            .get(n)
            .is_some_and(|s| s.load(Ordering::Acquire)))
    }

    /// Largest `n` such that levels `0..=n` are all sealed.
    pub fn max_sealed(&self) -> Result<Option<usize>> {
        let mut best = None;
        for n in 0..=MAX_LEVEL {
            if !self.is_sealed(n)? {
                break;
            }
            best = Some(n);
        }
        Ok(best)
    }

    fn write_meta(&self) -> Result<()> {
        let max = match self.max_sealed()? {
            Some(n) => n.to_string(),
            None => "none".into(),
        };
        let text = format!("format_version={FORMAT_VERSION}\nmax_sealed={max}\n");
        write_atomic(&self.dir.join("meta"), text.as_bytes())
    }

    fn remove_level_files(&self, n: usize) -> Result<()> {
        for path in [self.manifest_path(n), self.level_path(n), self.wal_path(n)] {
            match fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == io::ErrorKind::NotFound => {}
                Err(e) => return Err(io_err(&path)(e)),
            }
        }
        Ok(())
    }

    /// Deletes every level from `n` upward, sealed or not.
    pub fn truncate_from(&self, n: usize) -> Result<()> {
        let mut open = self.lock();
        open.retain(|&level, _| level < n);
        for level in n..=MAX_LEVEL {
            self.sealed[level].store(false, Ordering::Release);
            *self.sealed_polys[level]
                .write()
                .unwrap_or_else(|p| p.into_inner()) = None;
            self.remove_level_files(level)?;
        }
        drop(open);
        self.write_meta()
    }

    /// Drops any in-progress state for level `n` so it can be rebuilt.
    pub fn reset_level(&self, n: usize) -> Result<()> {
        if self.is_sealed(n)? {
            return Err(StoreError::Sealed(n));
        }
        self.lock().remove(&n);
        self.remove_level_files(n)
    }

    /// Appends `rec` unless a record with its uid already exists. Returns
    /// whether it was written.
    pub fn insert_if_absent(&self, rec: TreeRecord) -> Result<bool> {
        rec.validate()?;
        let n = rec.n;
        if n > MAX_LEVEL {
            return Err(StoreError::LevelTooLarge(n));
        }
        let mut open = self.lock();
        if !open.contains_key(&n) && self.is_sealed(n)? {
            return Err(StoreError::Sealed(n));
        }
        let level = match open.entry(n) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                let path = self.wal_path(n);
                let file = OpenOptions::new()
                    .create(true)
                    .write(true)
                    .truncate(true)
                    .open(&path)
                    .map_err(io_err(&path))?;
                e.insert(OpenLevel {
                    index: HashMap::new(),
                    records: Vec::new(),
                    wal: BufWriter::new(file),
                })
            }
        };
        if level.index.contains_key(&rec.uid) {
            return Ok(false);
        }
        let mut line = format_record(&rec);
        line.push('\n');
        level
            .wal
            .write_all(line.as_bytes())
            .map_err(io_err(&self.wal_path(n)))?;
        level.index.insert(rec.uid.clone(), level.records.len());
        level.records.push(rec);
        Ok(true)
    }

    pub fn contains(&self, uid: &CanonicalCode) -> Result<bool> {
        Ok(self.fetch_polynomial(uid)?.is_some())
    }

    /// Stored coefficients for `uid`, if any level holds it.
    pub fn fetch_polynomial(&self, uid: &CanonicalCode) -> Result<Option<Polynomial>> {
        let n = uid.vertex_count();
        if n > MAX_LEVEL {
            return Ok(None);
        }
        if self.is_sealed(n)? {
            return Ok(self.sealed_index(n)?.get(uid).cloned());
        }
        let open = self.lock();
        Ok(open
            .get(&n)
            .and_then(|level| level.index.get(uid).map(|&i| level.records[i].poly.clone())))
    }

    fn sealed_index(&self, n: usize) -> Result<Arc<PolyIndex>> {
        if let Some(map) = self.sealed_polys[n]
            .read()
            .unwrap_or_else(|p| p.into_inner())
            .as_ref()
        {
            return Ok(Arc::clone(map));
        }
        let map: Arc<PolyIndex> = Arc::new(
            self.read_sealed(n)?
                .into_iter()
                .map(|r| (r.uid, r.poly))
                .collect(),
        );
        let mut slot = self.sealed_polys[n]
            .write()
            .unwrap_or_else(|p| p.into_inner());
        Ok(Arc::clone(slot.get_or_insert(map)))
    }

    /// All records with `n` vertices: sorted by uid when sealed, insertion
    /// order while the level is open, empty if it was never started.
    pub fn fetch_level(&self, n: usize) -> Result<Vec<TreeRecord>> {
        if self.is_sealed(n)? {
            return self.read_sealed(n);
        }
        Ok(self
            .lock()
            .get(&n)
            .map(|level| level.records.clone())
            .unwrap_or_default())
    }

    /// Uids of a sealed or open level, in the order [`Store::fetch_level`]
    /// returns them.
    pub fn level_codes(&self, n: usize) -> Result<Vec<CanonicalCode>> {
        Ok(self.fetch_level(n)?.into_iter().map(|r| r.uid).collect())
    }

    fn read_sealed(&self, n: usize) -> Result<Vec<TreeRecord>> {
        let path = self.level_path(n);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        text.lines()
            .enumerate()
            .map(|(i, line)| {
                parse_record(line).map_err(|e| StoreError::Corrupt {
                    path: path.clone(),
                    line: i + 1,
                    reason: e.reason,
                })
            })
            .collect()
    }

    /// Number of records currently held by an open level.
    pub fn open_count(&self, n: usize) -> usize {
        self.lock().get(&n).map_or(0, |level| level.records.len())
    }

    /// Finalizes level `n`: records are sorted by uid, written atomically,
    /// checksummed, and the manifest is published. The count must equal
    /// `expected` when given, and the built-in tree count when one exists.
    pub fn seal_level(&self, n: usize, expected: Option<u64>) -> Result<LevelManifest> {
        if self.is_sealed(n)? {
            return Err(StoreError::Sealed(n));
        }
        let mut open = self.lock();
        let mut records = match open.remove(&n) {
            Some(mut level) => {
                level.wal.flush().map_err(io_err(&self.wal_path(n)))?;
                level.records
            }
            None => Vec::new(),
        };
        drop(open);
        let found = records.len() as u64;
        for expected in [expected, expected_tree_count(n)].into_iter().flatten() {
            if found != expected {
                return Err(StoreError::CountMismatch { n, found, expected });
            }
        }
        records.sort_unstable_by(|a, b| a.uid.cmp(&b.uid));
        let mut bytes = Vec::new();
        for rec in &records {
            bytes.extend_from_slice(format_record(rec).as_bytes());
            bytes.push(b'\n');
        }
        write_atomic(&self.level_path(n), &bytes)?;
        let manifest = LevelManifest {
            n,
            record_count: found,
            sealed: true,
            checksum: sha256_hex(&bytes),
        };
        write_atomic(&self.manifest_path(n), manifest.render().as_bytes())?;
        self.sealed[n].store(true, Ordering::Release);
        let wal = self.wal_path(n);
        if wal.exists() {
            fs::remove_file(&wal).map_err(io_err(&wal))?;
        }
        self.write_meta()?;
        Ok(manifest)
    }

    /// Recomputes the checksum of a sealed level file. `Ok(None)` when the
    /// level is not sealed.
    pub fn verify_checksum(&self, n: usize) -> Result<Option<bool>> {
        let Some(manifest) = self.manifest(n)? else {
            return Ok(None);
        };
        let path = self.level_path(n);
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        Ok(Some(sha256_hex(&bytes) == manifest.checksum))
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut file = File::create(&tmp).map_err(io_err(&tmp))?;
        file.write_all(bytes).map_err(io_err(&tmp))?;
        file.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}
