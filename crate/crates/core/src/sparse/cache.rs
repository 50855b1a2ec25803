//! Binary CSR cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  b"TRILCSR\0"
//! version  u32      1
//! n        u64
//! nnz      u64
//! row_ptr  (n + 1) x u64
//! col_idx  nnz x u64
//! values   nnz x f64 (IEEE-754 bits)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"TRILCSR\0";
pub const CACHE_VERSION: u32 = 1;

pub fn write_csr_cache(path: impl AsRef<Path>, m: &CsrMatrix) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&(m.n() as u64).to_le_bytes())?;
    out.write_all(&(m.nnz() as u64).to_le_bytes())?;
    for &p in m.row_ptr() {
        out.write_all(&(p as u64).to_le_bytes())?;
    }
    for &j in m.col_idx() {
        out.write_all(&(j as u64).to_le_bytes())?;
    }
    for &v in m.values() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csr_cache(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let mut input = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Cache("bad magic bytes".into()));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let n = read_u64(&mut input)? as usize;
    let nnz = read_u64(&mut input)? as usize;
    let row_ptr = (0..=n)
        .map(|_| read_u64(&mut input).map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let col_idx = (0..nnz)
        .map(|_| read_u64(&mut input).map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let values = (0..nnz)
        .map(|_| read_u64(&mut input).map(f64::from_bits))
        .collect::<Result<Vec<_>>>()?;
    CsrMatrix::try_new(n, row_ptr, col_idx, values).map_err(|e| Error::Cache(e.to_string()))
}

fn read_u64(input: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    input
        .read_exact(&mut buf)
        .map_err(|e| Error::Cache(format!("truncated file: {e}")))?;
    Ok(u64::from_le_bytes(buf))
}
