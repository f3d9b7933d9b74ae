//! Contiguous index-range partitioning with deterministic merges.

use rayon::prelude::*;

const CHUNK: u64 = 1 << 14;

/// Folds `f` over `0..total` in contiguous chunks processed in parallel and
/// merges the partial accumulators. The result is independent of how rayon
/// schedules chunks provided `merge` is associative and commutative.
pub(crate) fn fold_range<T, F, M>(total: u64, init: impl Fn() -> T + Sync, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(&mut T, u64) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                f(&mut acc, i);
            }
            acc
        })
        .reduce(&init, &merge)
}

pub(crate) fn count_range(total: u64, pred: impl Fn(u64) -> bool + Sync) -> u64 {
    fold_range(
        total,
        || 0u64,
        |acc, i| {
            if pred(i) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub(crate) fn install<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> crate::Result<R> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(crate::error::invalid("worker count must be positive")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| crate::error::invalid(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
