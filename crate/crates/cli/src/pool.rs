//! Tiny scoped-thread worker pool for embarrassingly parallel trial cells.
//!
//! Results land in their task's slot, so output order never depends on
//! scheduling; combined with counter-addressed randomness this keeps
//! parallel sweeps bit-reproducible.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Worker count: `SHALLOW_LANDSCAPE_THREADS` caps the available
/// parallelism; at least one.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var("SHALLOW_LANDSCAPE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(cap) if cap >= 1 => available.min(cap),
        _ => available,
    }
}

/// Run `worker` over `0..tasks`, preserving task order in the result.
pub fn run_indexed<T, E, F>(tasks: usize, worker: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync,
{
    let threads = worker_count().min(tasks.max(1));
    if threads <= 1 {
        return (0..tasks).map(&worker).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..tasks).map(|_| None).collect());
    let error: Mutex<Option<E>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= tasks {
                    break;
                }
                if error.lock().unwrap().is_some() {
                    break;
                }
                match worker(idx) {
                    Ok(value) => slots.lock().unwrap()[idx] = Some(value),
                    Err(e) => {
                        let mut guard = error.lock().unwrap();
                        if guard.is_none() {
                            *guard = Some(e);
                        }
                        break;
                    }
                }
            });
        }
    });
    if let Some(e) = error.into_inner().unwrap() {
        return Err(e);
    }
    Ok(slots.into_inner().unwrap().into_iter().map(|slot| slot.expect("all tasks ran")).collect())
}
