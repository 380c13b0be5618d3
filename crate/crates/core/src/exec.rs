//! Chunked data-parallel execution with a sequential fallback.
//!
//! Work is always split into the same fixed-size chunks and each chunk writes
//! only its own slice of the output, so results are bit-identical whatever
//! the worker count, and identical with the `parallel` feature disabled.

/// Whether this build can run on more than one thread.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// Default worker count: the rayon pool size, or 1 without the `parallel` feature.
pub fn default_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Calls `f(chunk_index, chunk)` for every `chunk_len`-sized piece of `out`.
pub fn for_each_chunk<T, F>(out: &mut [T], chunk_len: usize, workers: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk_len = chunk_len.max(1);
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => {
                pool.install(|| out.par_chunks_mut(chunk_len).enumerate().for_each(|(i, c)| f(i, c)));
                return;
            }
            Err(e) => log_pool_failure(&e),
        }
    }
    let _ = workers;
    for (i, c) in out.chunks_mut(chunk_len).enumerate() {
        f(i, c);
    }
}

#[cfg(feature = "parallel")]
fn log_pool_failure(e: &rayon::ThreadPoolBuildError) {
    eprintln!("warning: thread pool unavailable ({e}); running sequentially");
}
