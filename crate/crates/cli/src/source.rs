use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use trilab::sparse::{
    coo_to_csr, gen_laplacian_5pt, read_csr_cache, read_matrix_market, write_csr_cache, CsrMatrix,
};

/// Where a matrix comes from: a file, or a generator spec such as
/// `laplacian5pt:64x64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixSource {
    File(PathBuf),
    Laplacian { nx: usize, ny: usize },
}

impl FromStr for MatrixSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(dims) = s.strip_prefix("laplacian5pt:") else {
            return Ok(Self::File(PathBuf::from(s)));
        };
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad grid size `{t}` in `{s}` (expected laplacian5pt:NXxNY)"))
        };
        match dims.split_once(['x', 'X']) {
            Some((nx, ny)) => Ok(Self::Laplacian { nx: parse(nx)?, ny: parse(ny)? }),
            None => Err(format!("bad generator spec `{s}` (expected laplacian5pt:NXxNY)")),
        }
    }
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File(p) => write!(f, "{}", p.display()),
            Self::Laplacian { nx, ny } => write!(f, "laplacian5pt:{nx}x{ny}"),
        }
    }
}

/// A matrix with its right-hand side `b = A * 1`.
pub struct LoadedSystem {
    pub name: String,
    pub a: CsrMatrix,
    pub b: Vec<f64>,
}

impl MatrixSource {
    /// Loads the matrix. Files ending in `.csrbin` are read as binary caches;
    /// anything else as MatrixMarket. With `cache`, an existing cache file is
    /// used in place of the source and a missing one is written after loading.
    pub fn load(&self, cache: Option<&Path>) -> Result<LoadedSystem> {
        let name = self.to_string();
        if let Some(path) = cache.filter(|p| p.exists()) {
            let a = read_csr_cache(path)
                .with_context(|| format!("reading cache {}", path.display()))?;
            return Ok(with_ones_rhs(name, a));
        }
        let a = match self {
            Self::Laplacian { nx, ny } => gen_laplacian_5pt(*nx, *ny)?.0,
            Self::File(path) if path.extension().is_some_and(|e| e == "csrbin") => {
                read_csr_cache(path).with_context(|| format!("reading {}", path.display()))?
            }
            Self::File(path) => {
                let coo = read_matrix_market(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let (a, filled) = coo_to_csr(&coo);
                if coo.dropped_zeros > 0 {
                    eprintln!("note: dropped {} explicit zero off-diagonal entries", coo.dropped_zeros);
                }
                if !filled.is_empty() {
                    bail!("{}: {} rows have no diagonal entry (first: row {})", path.display(), filled.len(), filled[0]);
                }
                a
            }
        };
        if let Some(path) = cache {
            write_csr_cache(path, &a).with_context(|| format!("writing cache {}", path.display()))?;
        }
        Ok(with_ones_rhs(name, a))
    }
}

fn with_ones_rhs(name: String, a: CsrMatrix) -> LoadedSystem {
    let b = a.spmv(&vec![1.0; a.n()]).expect("length matches");
    LoadedSystem { name, a, b }
}
