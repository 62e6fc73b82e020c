//! Minimal work-queue parallelism for independent jobs.
//!
//! Results are written into their own slots, so the output order never
//! depends on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Runs `f(0..count)` on up to `jobs` threads and returns results in index
/// order. `jobs <= 1` degenerates to a plain sequential map.
pub fn run_jobs<R, F>(jobs: usize, count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync,
{
    let jobs = jobs.max(1).min(count.max(1));
    if jobs <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let result = f(i);
                slots.lock().expect("job slot lock")[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .expect("job slots")
        .into_iter()
        .map(|slot| slot.expect("every job ran"))
        .collect()
}
