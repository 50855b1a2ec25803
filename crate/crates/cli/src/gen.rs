use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use trilab::sparse::{gen_laplacian_5pt, write_matrix_market, MtxSymmetry};

/// Sidecar written next to a generated matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenMetadata {
    pub generator: String,
    pub nx: usize,
    pub ny: usize,
    pub n: usize,
    pub nnz: usize,
    pub rhs: String,
    pub matrix_file: String,
}

pub fn default_output(nx: usize, ny: usize) -> PathBuf {
    PathBuf::from(format!("laplacian5pt_{nx}x{ny}.mtx"))
}

/// Writes the 5-point Laplacian on an `nx` by `ny` grid to `out` and its
/// metadata to `out` with a `.json` extension.
pub fn generate(generator: &str, nx: usize, ny: usize, out: &Path) -> Result<GenMetadata> {
    if generator != "laplacian5pt" {
        bail!("unknown generator `{generator}` (available: laplacian5pt)");
    }
    let (a, _) = gen_laplacian_5pt(nx, ny)?;
    write_matrix_market(out, &a, MtxSymmetry::Symmetric)
        .with_context(|| format!("writing {}", out.display()))?;
    let meta = GenMetadata {
        generator: generator.to_string(),
        nx,
        ny,
        n: a.n(),
        nnz: a.nnz(),
        rhs: "A*1".to_string(),
        matrix_file: out.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
    };
    let meta_path = out.with_extension("json");
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(meta)
}
