use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Persistent worker pool shared by all kernel invocations.
#[derive(Debug)]
pub struct KernelPool {
    pool: rayon::ThreadPool,
    threads: usize,
}

impl KernelPool {
    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::InvalidParameter("thread count must be >= 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("trilab-{i}"))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start thread pool: {e}")))?;
        Ok(Self { pool, threads })
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

/// Thread synchronizations performed by one substitution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BarrierCounter {
    count: usize,
}

impl BarrierCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        self.count = 0;
    }

    pub fn record(&mut self) {
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Splits `units` into at most `parts` contiguous ranges. Every range but
/// the last holds a multiple of `granule` units.
pub fn partition(units: usize, parts: usize, granule: usize) -> Vec<Range<usize>> {
    let granule = granule.max(1);
    let parts = parts.max(1);
    let groups = units.div_ceil(granule);
    (0..parts)
        .map(|p| {
            let lo = (p * groups / parts * granule).min(units);
            let hi = ((p + 1) * groups / parts * granule).min(units);
            lo..hi
        })
        .filter(|r| !r.is_empty())
        .collect()
}

/// One color's phase: its row span and the row range each worker owns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ColorPhase {
    pub span: Range<usize>,
    pub chunks: Vec<Range<usize>>,
}

/// Static schedule of a parallel substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PhasePlan {
    pub n: usize,
    pub phases: Vec<ColorPhase>,
}

impl PhasePlan {
    /// Colors whose spans are split into per-worker row chunks by `chunker`.
    pub fn new(
        n: usize,
        spans: impl IntoIterator<Item = Range<usize>>,
        mut chunker: impl FnMut(usize, &Range<usize>) -> Vec<Range<usize>>,
    ) -> Self {
        let phases = spans
            .into_iter()
            .enumerate()
            .map(|(c, span)| ColorPhase {
                chunks: chunker(c, &span),
                span,
            })
            .collect();
        Self { n, phases }
    }

    /// Runs colors in ascending order. `body(done, start, out)` fills rows
    /// `start..start + out.len()`; `done` holds every row of earlier colors.
    pub fn run_forward<F>(
        &self,
        pool: &KernelPool,
        y: &mut [f64],
        counter: &mut BarrierCounter,
        body: F,
    ) where
        F: Fn(&[f64], usize, &mut [f64]) + Sync,
    {
        counter.reset();
        let last = self.phases.len().saturating_sub(1);
        for (c, phase) in self.phases.iter().enumerate() {
            let (done, rest) = y.split_at_mut(phase.span.start);
            let pieces = split_chunks(&mut rest[..phase.span.len()], phase);
            let done: &[f64] = done;
            pool.install(|| {
                pieces
                    .into_par_iter()
                    .for_each(|(start, out)| body(done, start, out))
            });
            if c < last {
                counter.record();
            }
        }
    }

    /// Runs colors in descending order. `body(later, start, out)` fills rows
    /// `start..start + out.len()`; `later` holds every row from the end of the
    /// current color onwards.
    pub fn run_backward<F>(
        &self,
        pool: &KernelPool,
        z: &mut [f64],
        counter: &mut BarrierCounter,
        body: F,
    ) where
        F: Fn(&[f64], usize, &mut [f64]) + Sync,
    {
        counter.reset();
        for (c, phase) in self.phases.iter().enumerate().rev() {
            let (head, later) = z.split_at_mut(phase.span.end);
            let pieces = split_chunks(&mut head[phase.span.start..], phase);
            let later: &[f64] = later;
            pool.install(|| {
                pieces
                    .into_par_iter()
                    .for_each(|(start, out)| body(later, start, out))
            });
            if c > 0 {
                counter.record();
            }
        }
    }
}

fn split_chunks<'a>(mut span: &'a mut [f64], phase: &ColorPhase) -> Vec<(usize, &'a mut [f64])> {
    let mut pieces = Vec::with_capacity(phase.chunks.len());
    let mut offset = phase.span.start;
    for chunk in &phase.chunks {
        debug_assert_eq!(chunk.start, offset, "chunks must tile the color span");
        let (head, tail) = std::mem::take(&mut span).split_at_mut(chunk.len());
        pieces.push((chunk.start, head));
        span = tail;
        offset = chunk.end;
    }
    debug_assert_eq!(offset, phase.span.end);
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_respects_granule() {
        assert_eq!(partition(10, 3, 1), vec![0..3, 3..6, 6..10]);
        assert_eq!(partition(10, 2, 4), vec![0..4, 4..10]);
        assert_eq!(partition(2, 8, 1), vec![0..1, 1..2]);
        assert!(partition(0, 4, 1).is_empty());
    }

    #[test]
    fn counter_resets_per_sweep() {
        let pool = KernelPool::new(2).unwrap();
        let plan = PhasePlan::new(6, [0..2, 2..4, 4..6], |_, s| partition(s.len(), 2, 1)
            .into_iter()
            .map(|r| r.start + s.start..r.end + s.start)
            .collect());
        let mut y = vec![0.0; 6];
        let mut counter = BarrierCounter::new();
        plan.run_forward(&pool, &mut y, &mut counter, |done, start, out| {
            for (k, v) in out.iter_mut().enumerate() {
                *v = done.iter().sum::<f64>() + (start + k) as f64;
            }
        });
        assert_eq!(counter.count(), 2);
        assert_eq!(y, vec![0.0, 1.0, 3.0, 4.0, 12.0, 13.0]);
        plan.run_backward(&pool, &mut y, &mut counter, |_, _, out| out.fill(1.0));
        assert_eq!(counter.count(), 2);
    }
}
