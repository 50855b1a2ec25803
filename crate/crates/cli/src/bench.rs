//! Benchmark sweeps driven by a TOML plan:
//!
//! ```toml
//! matrix = "laplacian5pt:64x64"
//! repetitions = 3
//!
//! [[config]]
//! ordering = "hbmc"
//! bs = 8
//! w = 4
//! format = "sell"
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use trilab::ordering::OrderingKind;
use trilab::solver::{pcg, CgConfig, SpmvFormat};

use crate::source::{LoadedSystem, MatrixSource};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchPlan {
    pub matrix: String,
    #[serde(default = "one")]
    pub repetitions: usize,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub config: Vec<BenchConfig>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub ordering: OrderingKind,
    #[serde(default = "default_bs")]
    pub bs: usize,
    #[serde(default = "default_w")]
    pub w: usize,
    #[serde(default = "default_format")]
    pub format: SpmvFormat,
    #[serde(default)]
    pub shift: f64,
}

fn one() -> usize {
    1
}

fn default_bs() -> usize {
    32
}

fn default_w() -> usize {
    4
}

fn default_format() -> SpmvFormat {
    SpmvFormat::Crs
}

impl BenchPlan {
    pub fn from_toml(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).context("parsing bench plan")?;
        if plan.config.is_empty() {
            bail!("bench plan has no [[config]] entries");
        }
        if plan.repetitions == 0 {
            bail!("repetitions must be >= 1");
        }
        Ok(plan)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }
}

/// One CSV line; `repetition` is the 1-based index or `median`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub matrix: String,
    pub config: usize,
    pub ordering: OrderingKind,
    pub b_s: usize,
    pub w: usize,
    pub format: SpmvFormat,
    pub shift: f64,
    pub threads: usize,
    pub repetition: String,
    pub n_c: Option<usize>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub setup_s: Option<f64>,
    pub solve_s: Option<f64>,
    pub time_per_iter_s: Option<f64>,
    pub error: String,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Runs every configuration `repetitions` times after `warmup` unrecorded
/// solves. Failed solves become rows with `error` set.
pub fn run_plan(plan: &BenchPlan, sys: &LoadedSystem, threads: usize, warmup: usize) -> Vec<BenchRow> {
    let threads = plan.threads.unwrap_or(threads);
    let mut rows = Vec::new();
    for (k, c) in plan.config.iter().enumerate() {
        let mut cfg = CgConfig {
            ordering: c.ordering,
            block_size: c.bs,
            simd_width: c.w,
            shift: c.shift,
            threads,
            spmv_format: c.format,
            ..CgConfig::default()
        };
        if let Some(tol) = plan.tol {
            cfg.tol = tol;
        }
        if let Some(max_iters) = plan.max_iters {
            cfg.max_iters = max_iters;
        }
        let blank = BenchRow {
            matrix: sys.name.clone(),
            config: k,
            ordering: c.ordering,
            b_s: c.bs,
            w: c.w,
            format: c.format,
            shift: c.shift,
            threads,
            repetition: String::new(),
            n_c: None,
            iterations: None,
            converged: None,
            setup_s: None,
            solve_s: None,
            time_per_iter_s: None,
            error: String::new(),
        };
        for _ in 0..warmup {
            let _ = pcg(&sys.a, &sys.b, &cfg);
        }
        let mut done = Vec::new();
        for rep in 1..=plan.repetitions {
            let mut row = BenchRow { repetition: rep.to_string(), ..blank.clone() };
            match pcg(&sys.a, &sys.b, &cfg) {
                Ok((_, r)) => {
                    row.n_c = Some(r.n_c);
                    row.iterations = Some(r.iterations);
                    row.converged = Some(r.converged);
                    row.setup_s = Some(r.time_setup_s);
                    row.solve_s = Some(r.time_solve_s);
                    row.time_per_iter_s = Some(r.time_solve_s / r.iterations.max(1) as f64);
                    done.push(row.clone());
                }
                Err(e) => row.error = e.to_string(),
            }
            rows.push(row);
        }
        let mut summary = BenchRow { repetition: "median".into(), ..blank };
        if done.is_empty() {
            summary.error = "all repetitions failed".into();
        } else {
            let col = |f: fn(&BenchRow) -> Option<f64>| median(done.iter().filter_map(f).collect());
            summary.n_c = done[0].n_c;
            summary.iterations = col(|r| r.iterations.map(|i| i as f64)).map(|m| m.round() as usize);
            summary.converged = Some(done.iter().all(|r| r.converged == Some(true)));
            summary.setup_s = col(|r| r.setup_s);
            summary.solve_s = col(|r| r.solve_s);
            summary.time_per_iter_s = col(|r| r.time_per_iter_s);
        }
        rows.push(summary);
    }
    rows
}

pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_plan_matrix(plan: &BenchPlan) -> Result<LoadedSystem> {
    let source: MatrixSource = plan.matrix.parse().map_err(anyhow::Error::msg)?;
    source.load(None)
}
