//! Binary checkpoint files holding one search level.
//!
//! Layout (integers little-endian):
//!
//! ```text
//! magic      8 bytes  "GRACEFL1"
//! version    u16
//! n          u16
//! constraint u8 tag (0 none, 1 one endpoint, 2 two endpoints), u8 a, u8 b
//! level      u16
//! records    u64
//! record     2n key bytes, u128 direct, u128 reflected   (sorted by key)
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::search::{ClassMap, Constraint, MultiplicityPair};
use crate::state::CanonicalKey;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"GRACEFL1";
pub const CHECKPOINT_VERSION: u16 = 1;

const HEADER_LEN: usize = 8 + 2 + 2 + 3 + 2 + 8;

fn constraint_bytes(c: &Constraint) -> [u8; 3] {
    match *c {
        Constraint::None => [0, 0, 0],
        Constraint::OneEndpoint(a) => [1, a as u8, 0],
        Constraint::TwoEndpoints(a, b) => [2, a as u8, b as u8],
    }
}

/// Serializes `map` (computed under `constraint`) to bytes.
pub fn write_checkpoint(map: &ClassMap, constraint: &Constraint) -> Result<Vec<u8>> {
    constraint.validate(map.n())?;
    let n = map.n();
    let mut out = Vec::with_capacity(HEADER_LEN + map.len() * (2 * n + 32));
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u16).to_le_bytes());
    out.extend_from_slice(&constraint_bytes(constraint));
    out.extend_from_slice(&(map.level() as u16).to_le_bytes());
    out.extend_from_slice(&(map.len() as u64).to_le_bytes());
    for (key, pair) in map.sorted() {
        key.write_bytes(&mut out);
        out.extend_from_slice(&pair.direct.to_le_bytes());
        out.extend_from_slice(&pair.reflected.to_le_bytes());
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < len {
            return Err(Error::Truncated {
                path: self.path.to_path_buf(),
                detail: format!("{what} needs {len} bytes at offset {}", self.pos),
            });
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn u128(&mut self, what: &str) -> Result<u128> {
        Ok(u128::from_le_bytes(self.take(16, what)?.try_into().unwrap()))
    }
}

/// Parses checkpoint bytes; `path` is only used in error messages.
pub fn read_checkpoint(bytes: &[u8], path: &Path) -> Result<(ClassMap, Constraint)> {
    let mut r = Reader { buf: bytes, pos: 0, path };
    let mismatch = |detail: String| Error::HeaderMismatch { path: path.to_path_buf(), detail };
    if bytes.len() < 8 {
        return Err(Error::Truncated { path: path.to_path_buf(), detail: "shorter than magic".into() });
    }
    if r.take(8, "magic")? != CHECKPOINT_MAGIC {
        return Err(Error::BadMagic { path: path.to_path_buf() });
    }
    let version = r.u16("version")?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::BadVersion { path: path.to_path_buf(), version });
    }
    let n = r.u16("n")? as usize;
    let c = r.take(3, "constraint")?;
    let constraint = match c[0] {
        0 => Constraint::None,
        1 => Constraint::OneEndpoint(c[1] as usize),
        2 => Constraint::TwoEndpoints(c[1] as usize, c[2] as usize),
        t => return Err(mismatch(format!("unknown constraint tag {t}"))),
    };
    let level = r.u16("level")? as usize;
    let records = r.u64("record count")?;
    ClassMap::empty(n, level).map_err(|e| mismatch(e.to_string()))?;
    constraint.validate(n).map_err(|e| mismatch(e.to_string()))?;

    let bad = |index: u64, detail: String| Error::BadRecord { path: path.to_path_buf(), index, detail };
    let mut entries = FxHashMap::default();
    let mut prev: Option<CanonicalKey> = None;
    for index in 0..records {
        let key = CanonicalKey::from_bytes(r.take(2 * n, "record key")?).map_err(|e| bad(index, e.to_string()))?;
        let direct = r.u128("direct multiplicity")?;
        let reflected = r.u128("reflected multiplicity")?;
        if !key.is_canonical() {
            return Err(bad(index, "key is not canonical".into()));
        }
        if key.edges_placed() != n - 1 - level {
            return Err(bad(index, format!("key has {} edges, level needs {}", key.edges_placed(), n - 1 - level)));
        }
        if direct == 0 && reflected == 0 {
            return Err(bad(index, "empty multiplicity".into()));
        }
        if reflected != 0 && key.is_self_complementary() {
            return Err(bad(index, "self-complementary key with reflected count".into()));
        }
        if prev.as_ref().is_some_and(|p| *p >= key) {
            return Err(bad(index, "records not strictly sorted by key".into()));
        }
        prev = Some(key.clone());
        entries.insert(key, MultiplicityPair::new(direct, reflected));
    }
    if r.pos != bytes.len() {
        return Err(bad(records, format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok((ClassMap::from_parts(n, level, entries), constraint))
}

/// Writes `map` to `path` via a temporary file and rename.
pub fn save_checkpoint(map: &ClassMap, constraint: &Constraint, path: &Path) -> Result<()> {
    let bytes = write_checkpoint(map, constraint)?;
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(&bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

/// Loads a checkpoint and checks it was written for `n` and `constraint`.
pub fn load_checkpoint(path: &Path, n: usize, constraint: &Constraint) -> Result<ClassMap> {
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let (map, found) = read_checkpoint(&bytes, path)?;
    if map.n() != n {
        return Err(Error::HeaderMismatch {
            path: path.to_path_buf(),
            detail: format!("n={} but expected {n}", map.n()),
        });
    }
    if found != *constraint {
        return Err(Error::HeaderMismatch {
            path: path.to_path_buf(),
            detail: format!("constraint {found} but expected {constraint}"),
        });
    }
    Ok(map)
}

pub fn checkpoint_path(dir: &Path, n: usize, constraint: &Constraint, level: usize) -> PathBuf {
    let tag = match *constraint {
        Constraint::None => "none".to_string(),
        Constraint::OneEndpoint(a) => format!("e{a}"),
        Constraint::TwoEndpoints(a, b) => format!("e{a}-{b}"),
    };
    dir.join(format!("n{n}-{tag}-level{level:03}.ckpt"))
}

/// The deepest (lowest-level) checkpoint in `dir` for this run, if any.
pub fn latest_checkpoint(dir: &Path, n: usize, constraint: &Constraint) -> Option<PathBuf> {
    (0..n).map(|level| checkpoint_path(dir, n, constraint, level)).find(|p| p.is_file())
}

/// Level hook that persists each completed level to a directory.
#[derive(Debug)]
pub struct Checkpointer {
    dir: PathBuf,
    constraint: Constraint,
    keep_all: bool,
    last: Option<PathBuf>,
}

impl Checkpointer {
    pub fn new(dir: impl Into<PathBuf>, constraint: Constraint, keep_all: bool) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
        Ok(Checkpointer { dir, constraint, keep_all, last: None })
    }

    /// Marks `path` as already holding the current level, e.g. after a resume.
    pub fn resumed_from(mut self, path: PathBuf) -> Self {
        self.last = Some(path);
        self
    }

    pub fn record(&mut self, map: &ClassMap) -> Result<()> {
        let path = checkpoint_path(&self.dir, map.n(), &self.constraint, map.level());
        if self.last.as_ref() == Some(&path) {
            return Ok(());
        }
        save_checkpoint(map, &self.constraint, &path)?;
        if !self.keep_all {
            if let Some(old) = self.last.take() {
                let _ = fs::remove_file(old);
            }
        }
        self.last = Some(path);
        Ok(())
    }
}
