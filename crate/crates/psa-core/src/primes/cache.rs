//! On-disk segment cache.
//!
//! File layout: magic `PSA1`, little-endian u64 `lo`, little-endian u64 `hi`,
//! then the packed odd-index bitset, least-significant bit first, trimmed to
//! `ceil(bits / 8)` bytes.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use super::SieveSegment;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"PSA1";

const HEADER_LEN: usize = 4 + 8 + 8;

/// Cache file path for a segment, unique per (lo, hi).
pub fn segment_path(dir: &Path, lo: u64, hi: u64) -> PathBuf {
    dir.join(format!("seg-{lo}-{hi}.psa1"))
}

fn byte_len(bits: u64) -> usize {
    bits.div_ceil(8) as usize
}

/// Write a segment, creating the directory if needed. Atomic via temp+rename.
pub fn write_segment(dir: &Path, seg: &SieveSegment) -> io::Result<()> {
    static TMP_SEQ: AtomicU64 = AtomicU64::new(0);

    fs::create_dir_all(dir)?;
    let bits = seg.odd_count();
    let mut buf = Vec::with_capacity(HEADER_LEN + byte_len(bits));
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&seg.lo().to_le_bytes());
    buf.extend_from_slice(&seg.hi().to_le_bytes());
    for w in seg.words() {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    buf.truncate(HEADER_LEN + byte_len(bits));

    let final_path = segment_path(dir, seg.lo(), seg.hi());
    let tmp = dir.join(format!(
        ".seg-{}-{}.{}.{}.tmp",
        seg.lo(),
        seg.hi(),
        std::process::id(),
        TMP_SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
    }
    fs::rename(&tmp, &final_path)?;
    Ok(())
}

/// Read a cached segment; `Ok(None)` when the file does not exist.
pub fn read_segment(dir: &Path, lo: u64, hi: u64) -> Result<Option<SieveSegment>> {
    let path = segment_path(dir, lo, hi);
    let mut file = match fs::File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => {
            return Err(Error::CacheIo {
                path,
                source: e,
            })
        }
    };
    let mut data = Vec::new();
    file.read_to_end(&mut data).map_err(|source| Error::CacheIo {
        path: path.clone(),
        source,
    })?;

    let format_err = |reason: &str| Error::CacheFormat {
        path: path.clone(),
        reason: reason.to_string(),
    };
    if data.len() < HEADER_LEN {
        return Err(format_err("truncated header"));
    }
    if data[..4] != MAGIC {
        return Err(format_err("bad magic"));
    }
    let file_lo = u64::from_le_bytes(data[4..12].try_into().unwrap());
    let file_hi = u64::from_le_bytes(data[12..20].try_into().unwrap());
    if file_lo != lo || file_hi != hi {
        return Err(format_err("range mismatch"));
    }
    if lo < 2 || lo >= hi {
        return Err(format_err("invalid range"));
    }
    let bits = super::odd_count(lo, hi);
    if data.len() != HEADER_LEN + byte_len(bits) {
        return Err(format_err("length mismatch"));
    }
    let mut words = vec![0u64; (bits.div_ceil(64)) as usize];
    for (i, byte) in data[HEADER_LEN..].iter().enumerate() {
        words[i / 8] |= u64::from(*byte) << (8 * (i % 8));
    }
    Ok(Some(SieveSegment::from_parts(lo, hi, words)))
}
