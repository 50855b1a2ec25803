use rayon::prelude::*;

// Fixed chunking makes the reduction tree independent of the thread count.
const DOT_CHUNK: usize = 4096;

/// Dot product over the entries where `mask` is true (all entries if `None`).
///
/// Partial sums over fixed 4096-entry chunks are added in chunk order, so
/// the result is reproducible for any number of threads.
pub fn dot(x: &[f64], y: &[f64], mask: Option<&[bool]>) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let partials: Vec<f64> = x
        .par_chunks(DOT_CHUNK)
        .zip(y.par_chunks(DOT_CHUNK))
        .enumerate()
        .map(|(c, (xs, ys))| match mask {
            None => xs.iter().zip(ys).fold(0.0, |acc, (a, b)| acc + a * b),
            Some(m) => {
                let ms = &m[c * DOT_CHUNK..c * DOT_CHUNK + xs.len()];
                xs.iter()
                    .zip(ys)
                    .zip(ms)
                    .filter(|(_, &keep)| keep)
                    .fold(0.0, |acc, ((a, b), _)| acc + a * b)
            }
        })
        .collect();
    partials.iter().sum()
}

pub fn norm2(x: &[f64], mask: Option<&[bool]>) -> f64 {
    dot(x, x, mask).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut()
        .with_min_len(DOT_CHUNK)
        .zip(x.par_iter())
        .for_each(|(yi, xi)| *yi += alpha * xi);
}

/// `p = z + beta * p`
pub(crate) fn xpby(z: &[f64], beta: f64, p: &mut [f64]) {
    p.par_iter_mut()
        .with_min_len(DOT_CHUNK)
        .zip(z.par_iter())
        .for_each(|(pi, zi)| *pi = zi + beta * *pi);
}
