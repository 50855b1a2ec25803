use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tri_lab::{bench, check, gen, reorder, MatrixSource};
use trilab::ordering::OrderingKind;
use trilab::precond::KernelPool;
use trilab::solver::{pcg, CgConfig, SpmvFormat};

const EXIT_SETUP: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "tri-lab", version, about = "MC, BMC and HBMC orderings with IC(0)-preconditioned CG")]
struct Cli {
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, env = "TRI_LAB_THREADS", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    /// MatrixMarket file, `.csrbin` cache, or `laplacian5pt:NXxNY`.
    #[arg(long)]
    matrix: MatrixSource,

    /// Binary CSR cache: read if present, written otherwise.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long, default_value = "hbmc")]
    ordering: OrderingKind,

    /// Block size b_s.
    #[arg(long, default_value_t = 32)]
    bs: usize,

    /// SIMD width w.
    #[arg(long, default_value_t = 4)]
    w: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated matrix as MatrixMarket plus a JSON metadata file.
    Gen {
        generator: String,
        nx: usize,
        ny: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print ordering statistics and optionally dump the layout.
    Reorder {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        layout: LayoutArgs,
        /// Layout dump destination.
        #[arg(long, visible_alias = "out")]
        emit: Option<PathBuf>,
    },
    /// Solve `A x = A 1` and emit the JSON report.
    Solve {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long, default_value_t = 0.0)]
        shift: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 20_000)]
        max_iters: usize,
        #[arg(long, default_value = "crs")]
        format: SpmvFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a TOML benchmark plan and write CSV.
    Bench {
        plan: PathBuf,
        /// CSV destination; overrides `out` in the plan, stdout if neither.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Unrecorded solves before each configuration.
        #[arg(long, default_value_t = 0)]
        warmup: usize,
    },
    /// Run the equivalence and kernel checks over a grid of (b_s, w).
    Check {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
        bs: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
        w: Vec<usize>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let threads = cli.threads.map_or_else(tri_lab::default_threads, |t| t as usize);
    match cli.command {
        Command::Gen { generator, nx, ny, out } => {
            let out = out.unwrap_or_else(|| gen::default_output(nx, ny));
            let meta = match gen::generate(&generator, nx, ny, &out) {
                Ok(meta) => meta,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return Ok(ExitCode::from(EXIT_USAGE));
                }
            };
            println!("wrote {} (n = {}, nnz = {})", out.display(), meta.n, meta.nnz);
        }
        Command::Reorder { matrix, layout, emit } => {
            let sys = matrix.matrix.load(matrix.cache.as_deref())?;
            let r = reorder::reorder(&sys.a, layout.ordering, layout.bs, layout.w)?;
            if r.summary.single_block_warning {
                eprintln!(
                    "warning: block size {} exceeds n = {}; all unknowns form one block",
                    layout.bs, sys.a.n()
                );
            }
            println!("matrix: {}", sys.name);
            println!("{}", r.summary);
            if let Some(path) = emit {
                reorder::write_dump(&path, &r.rows)?;
            }
        }
        Command::Solve { matrix, layout, shift, tol, max_iters, format, out } => {
            let sys = matrix.matrix.load(matrix.cache.as_deref())?;
            let cfg = CgConfig {
                tol,
                max_iters,
                ordering: layout.ordering,
                block_size: layout.bs,
                simd_width: layout.w,
                shift,
                threads,
                spmv_format: format,
            };
            let (_, mut report) = pcg(&sys.a, &sys.b, &cfg)?;
            report.matrix = sys.name;
            let mut sink = output(out.as_ref())?;
            serde_json::to_writer_pretty(&mut sink, &report)?;
            writeln!(sink)?;
            sink.flush()?;
            if !report.converged {
                eprintln!("not converged after {} iterations", report.iterations);
                return Ok(ExitCode::from(EXIT_NOT_CONVERGED));
            }
        }
        Command::Bench { plan, out, warmup } => {
            let plan = match bench::BenchPlan::read(&plan) {
                Ok(plan) => plan,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return Ok(ExitCode::from(EXIT_USAGE));
                }
            };
            let sys = bench::load_plan_matrix(&plan)?;
            let rows = bench::run_plan(&plan, &sys, threads, warmup);
            bench::write_csv(output(out.as_ref().or(plan.out.as_ref()))?, &rows)?;
        }
        Command::Check { matrix, bs, w, inject_fault } => {
            let sys = matrix.matrix.load(matrix.cache.as_deref())?;
            let pool = KernelPool::new(threads)?;
            let mut failed = Vec::new();
            let mut total = 0;
            for &b_s in &bs {
                for &width in &w {
                    for outcome in check::check_case(&sys.a, b_s, width, &pool, inject_fault)? {
                        println!("{outcome}");
                        total += 1;
                        if !outcome.pass {
                            failed.push(format!("{} (b_s={b_s}, w={width})", outcome.property));
                        }
                    }
                }
            }
            println!("check: {}/{total} passed", total - failed.len());
            if !failed.is_empty() {
                eprintln!("failed: {}", failed.join(", "));
                return Ok(ExitCode::from(EXIT_SETUP));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_SETUP)
        }
    }
}
