//! On-disk cache of verified ingredient artifacts.
//!
//! One canonical design file per request, named by the request key, with a
//! sidecar `.key` file holding the key itself. Entries are re-verified on
//! every load; a failing entry is moved to `quarantine/` and reported.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::design::{AnyDesign, DesignFile, DesignKind, GroupType};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SPLITCODE_CACHE";
/// Default cache directory, relative to the working directory.
pub const DEFAULT_CACHE_DIR: &str = "ingredient-cache";

/// Parameters identifying an ingredient. Equal requests have equal keys and
/// distinct requests distinct keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IngredientRequest {
    pub kind: DesignKind,
    pub t: usize,
    pub k: usize,
    pub c: usize,
    pub v: usize,
    pub stem: usize,
    pub group_type: GroupType,
}

impl IngredientRequest {
    pub fn gdd(t: usize, k: usize, group_type: GroupType) -> Self {
        Self { kind: DesignKind::Gdd, t, k, c: 1, v: group_type.total(), stem: 0, group_type }
    }

    pub fn splitting_design(t: usize, v: usize, k: usize, c: usize) -> Self {
        Self { kind: DesignKind::SplittingDesign, t, k, c, v, stem: 0, group_type: GroupType::default() }
    }

    /// File-name safe key, e.g. `gdd_t2_k3_c1_v120_s0_g30x4`.
    pub fn key(&self) -> String {
        let groups: Vec<String> = self.group_type.pairs().map(|(s, m)| format!("{s}x{m}")).collect();
        let groups = if groups.is_empty() { "none".to_string() } else { groups.join("-") };
        format!(
            "{}_t{}_k{}_c{}_v{}_s{}_g{}",
            self.kind.as_str(),
            self.t,
            self.k,
            self.c,
            self.v,
            self.stem,
            groups
        )
    }

    fn matches(&self, file: &DesignFile) -> bool {
        let group_type = GroupType::of_groups(&file.groups);
        file.kind == self.kind
            && file.t == self.t
            && file.k == self.k
            && file.c == self.c
            && file.v == self.v
            && file.stem.len() == self.stem
            && group_type == self.group_type
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("corrupt cache entry {key} ({reason}); moved to {quarantined}", quarantined = .quarantined.display())]
    CorruptEntry { key: String, reason: String, quarantined: PathBuf },
    #[error("refusing to cache an invalid artifact for {0}")]
    InvalidArtifact(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngredientCache {
    dir: PathBuf,
}

impl IngredientCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Explicit directory, else `$SPLITCODE_CACHE`, else `./ingredient-cache`.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match flag {
            Some(p) => Self::new(p),
            None => match std::env::var_os(CACHE_ENV) {
                Some(p) if !p.is_empty() => Self::new(p),
                _ => Self::new(DEFAULT_CACHE_DIR),
            },
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, req: &IngredientRequest) -> PathBuf {
        self.dir.join(format!("{}.json", req.key()))
    }

    /// Loads and re-verifies an entry. `Ok(None)` when absent.
    pub fn get(&self, req: &IngredientRequest) -> Result<Option<(AnyDesign, Value)>, CacheError> {
        let path = self.entry_path(req);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let reason = match DesignFile::parse(&text) {
            Err(e) => e.to_string(),
            Ok(file) if !req.matches(&file) => "parameters differ from the request".to_string(),
            Ok(file) => {
                let provenance = file.provenance.clone();
                match file.into_design() {
                    Err(e) => e.to_string(),
                    Ok(design) => {
                        let report = design.verify();
                        if report.valid {
                            return Ok(Some((design, provenance)));
                        }
                        format!("verification failed: {:?}", report.witness)
                    }
                }
            }
        };
        let quarantined = self.quarantine(req, &path)?;
        Err(CacheError::CorruptEntry { key: req.key(), reason, quarantined })
    }

    /// Verifies and stores an artifact atomically (temp file plus rename).
    pub fn put(&self, req: &IngredientRequest, design: &AnyDesign, provenance: Value) -> Result<PathBuf, CacheError> {
        if !design.verify().valid {
            return Err(CacheError::InvalidArtifact(req.key()));
        }
        fs::create_dir_all(&self.dir)?;
        let path = self.entry_path(req);
        write_atomic(&path, design.to_canonical_json(provenance).as_bytes())?;
        write_atomic(&self.dir.join(format!("{}.key", req.key())), format!("{}\n", req.key()).as_bytes())?;
        Ok(path)
    }

    fn quarantine(&self, req: &IngredientRequest, path: &Path) -> Result<PathBuf, CacheError> {
        let qdir = self.dir.join("quarantine");
        fs::create_dir_all(&qdir)?;
        let target = qdir.join(format!("{}.json", req.key()));
        fs::rename(path, &target)?;
        let _ = fs::remove_file(self.dir.join(format!("{}.key", req.key())));
        Ok(target)
    }
}

/// Writes to a sibling temp file, syncs, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
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
