//! On-disk field cache.
//!
//! Binary layout (all integers little-endian `u32`):
//!
//! ```text
//! magic            4 bytes  "FFQC"
//! format_version   u32
//! p, r             u32, u32
//! modulus          (r + 1) x u32, low-to-high
//! generator        u32      element index
//! q                u32
//! elements         q * r x u32, element i's coefficients, constant first
//! dlog             q x u32, entry 0 written as 0xFFFFFFFF
//! checksum         32 bytes SHA-256 of everything above
//! ```
//!
//! Files are named `field-p{p}-r{r}-v{format_version}.ffc`; a JSON mirror
//! with the same content is available through [`to_json`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::FieldCtx;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"FFQC";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Created,
    /// Existing file decoded, checksum verified, and byte-identical to a rebuild.
    Unchanged,
    /// Existing file was unreadable, stale or corrupt and has been replaced.
    Rebuilt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCacheJson {
    pub format_version: u32,
    pub p: u32,
    pub r: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub generator: u32,
    pub elements: Vec<Vec<u32>>,
    pub dlog: Vec<Option<u32>>,
    pub checksum: String,
}

pub fn cache_path(dir: &Path, p: u32, r: u32) -> PathBuf {
    dir.join(format!("field-p{p}-r{r}-v{FORMAT_VERSION}.ffc"))
}

fn push(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

pub fn encode(ctx: &FieldCtx) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    push(&mut buf, FORMAT_VERSION);
    push(&mut buf, ctx.p());
    push(&mut buf, ctx.r());
    for &c in ctx.modulus() {
        push(&mut buf, c);
    }
    push(&mut buf, ctx.generator().index());
    push(&mut buf, ctx.q());
    for &d in ctx.digit_table() {
        push(&mut buf, d);
    }
    for (i, &k) in ctx.dlog_table().iter().enumerate() {
        push(&mut buf, if i == 0 { u32::MAX } else { k });
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn checksum_hex(ctx: &FieldCtx) -> String {
    let bytes = encode(ctx);
    hex(&bytes[bytes.len() - 32..])
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u32(&mut self) -> Result<u32> {
        let bytes = self
            .buf
            .get(self.pos..self.pos + 4)
            .ok_or_else(|| Error::Cache("truncated cache file".into()))?;
        self.pos += 4;
        Ok(u32::from_le_bytes(bytes.try_into().unwrap()))
    }

    fn vec(&mut self, n: usize) -> Result<Vec<u32>> {
        (0..n).map(|_| self.u32()).collect()
    }
}

pub fn decode(bytes: &[u8]) -> Result<FieldCtx> {
    if bytes.len() < 4 + 32 || &bytes[..4] != MAGIC {
        return Err(Error::Cache("not a field cache file".into()));
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let mut rd = Reader { buf: body, pos: 4 };
    let version = rd.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Cache(format!(
            "format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let p = rd.u32()?;
    let r = rd.u32()?;
    if r == 0 || r > 16 {
        return Err(Error::Cache(format!("implausible degree {r}")));
    }
    let modulus = rd.vec(r as usize + 1)?;
    let generator = rd.u32()?;
    let q = rd.u32()?;
    if p.checked_pow(r) != Some(q) || q > super::MAX_Q {
        return Err(Error::Cache(format!("inconsistent header p={p} r={r} q={q}")));
    }
    let digits = rd.vec(q as usize * r as usize)?;
    let mut dlog = rd.vec(q as usize)?;
    if rd.pos != body.len() {
        return Err(Error::Cache("trailing bytes before checksum".into()));
    }
    dlog[0] = 0;
    FieldCtx::from_parts(p, r, modulus, generator, digits, dlog)
}

pub fn to_json(ctx: &FieldCtx) -> FieldCacheJson {
    FieldCacheJson {
        format_version: FORMAT_VERSION,
        p: ctx.p(),
        r: ctx.r(),
        q: ctx.q(),
        modulus: ctx.modulus().to_vec(),
        generator: ctx.generator().index(),
        elements: ctx.elements().map(|e| ctx.coeffs(e).to_vec()).collect(),
        dlog: ctx
            .elements()
            .map(|e| ctx.dlog(e).ok())
            .collect(),
        checksum: checksum_hex(ctx),
    }
}

/// Writes the cache for `(p, r)` under `dir`, verifying an existing file
/// rather than rewriting it when it is valid.
pub fn write_cache(dir: &Path, p: u32, r: u32) -> Result<(FieldCtx, CacheStatus)> {
    let path = cache_path(dir, p, r);
    let ctx = FieldCtx::new(p, r)?;
    let fresh = encode(&ctx);
    let status = match fs::read(&path) {
        Ok(existing) if existing == fresh && decode(&existing).is_ok() => {
            return Ok((ctx, CacheStatus::Unchanged))
        }
        Ok(_) => CacheStatus::Rebuilt,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => CacheStatus::Created,
        Err(e) => return Err(e.into()),
    };
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("ffc.tmp");
    fs::write(&tmp, &fresh)?;
    fs::rename(&tmp, &path)?;
    Ok((ctx, status))
}

/// Loads `(p, r)` from `dir`, building and persisting it when absent or stale.
pub fn load_or_build(dir: &Path, p: u32, r: u32) -> Result<FieldCtx> {
    let path = cache_path(dir, p, r);
    if let Ok(bytes) = fs::read(&path) {
        if let Ok(ctx) = decode(&bytes) {
            if ctx.p() == p && ctx.r() == r {
                return Ok(ctx);
            }
        }
    }
    write_cache(dir, p, r).map(|(ctx, _)| ctx)
}
