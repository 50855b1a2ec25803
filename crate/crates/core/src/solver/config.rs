use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordering::OrderingKind;

/// Storage used for the SpMV inside CG.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpmvFormat {
    Crs,
    Sell,
}

impl SpmvFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Crs => "crs",
            Self::Sell => "sell",
        }
    }
}

impl fmt::Display for SpmvFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpmvFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "crs" | "csr" => Ok(Self::Crs),
            "sell" => Ok(Self::Sell),
            _ => Err(format!("unknown SpMV format `{s}` (expected crs or sell)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgConfig {
    /// Stop once `||r|| / ||b|| < tol`.
    pub tol: f64,
    pub max_iters: usize,
    pub ordering: OrderingKind,
    pub block_size: usize,
    pub simd_width: usize,
    /// Diagonal shift: the factorized matrix is `A + shift * diag(A)`.
    pub shift: f64,
    pub threads: usize,
    pub spmv_format: SpmvFormat,
}

impl Default for CgConfig {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iters: 20_000,
            ordering: OrderingKind::Natural,
            block_size: 32,
            simd_width: 4,
            shift: 0.0,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            spmv_format: SpmvFormat::Crs,
        }
    }
}

impl CgConfig {
    pub fn with_ordering(mut self, ordering: OrderingKind) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn with_blocking(mut self, block_size: usize, simd_width: usize) -> Self {
        self.block_size = block_size;
        self.simd_width = simd_width;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol {} must be > 0", self.tol)));
        }
        if self.block_size == 0 || self.simd_width == 0 {
            return Err(Error::InvalidParameter(
                "block size and SIMD width must be >= 1".into(),
            ));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParameter("thread count must be >= 1".into()));
        }
        if !(self.shift >= 0.0) {
            return Err(Error::InvalidParameter(format!("shift {} must be >= 0", self.shift)));
        }
        Ok(())
    }
}
