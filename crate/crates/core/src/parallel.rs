//! Thread-pool configuration. `TTGEO_THREADS` caps the worker count; results
//! never depend on it.

use std::sync::Once;

pub const THREADS_ENV: &str = "TTGEO_THREADS";

static INIT: Once = Once::new();

/// Worker count requested through the environment, if any.
pub fn requested_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Configures the global pool once. Later calls, or a pool built elsewhere,
/// leave the existing configuration in place.
pub fn init() {
    INIT.call_once(|| {
        if let Some(n) = requested_threads() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
}

/// Runs `f` on a dedicated pool with exactly `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}
