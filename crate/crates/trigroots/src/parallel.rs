use rayon::prelude::*;

use crate::Result;

/// Runs `trial(i)` for `i in 0..trials` on `threads` workers (0 = all cores)
/// and returns the results in trial order.
pub(crate) fn run_trials<T, F>(threads: usize, trials: u64, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| (0..trials).into_par_iter().map(&trial).collect())
}

/// Like [`run_trials`] over an arbitrary slice of work items.
pub(crate) fn map_ordered<I, T, F>(threads: usize, items: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}
