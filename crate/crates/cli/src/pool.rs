//! Bounded worker pool for the verification jobs. Worker count comes from
//! `FRACSEMI_THREADS` (default: machine parallelism); results are assembled
//! by index so the output order never depends on scheduling.

use fracsemi_core::error::Result;
use fracsemi_core::verify::{CheckJob, CheckReport};
use std::collections::VecDeque;
use std::sync::Mutex;

pub fn worker_count() -> usize {
    if let Ok(text) = std::env::var("FRACSEMI_THREADS") {
        if let Ok(k) = text.trim().parse::<usize>() {
            return k.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|k| k.get())
        .unwrap_or(1)
}

pub fn run_jobs(jobs: Vec<CheckJob<'static>>, workers: usize) -> Result<Vec<CheckReport>> {
    let total = jobs.len();
    let queue: Mutex<VecDeque<(usize, CheckJob)>> =
        Mutex::new(jobs.into_iter().enumerate().collect());
    let results: Mutex<Vec<Option<Result<CheckReport>>>> = Mutex::new((0..total).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(total.max(1)) {
            scope.spawn(|| loop {
                let job = queue.lock().expect("queue lock").pop_front();
                match job {
                    Some((idx, (_, run))) => {
                        let outcome = run();
                        results.lock().expect("results lock")[idx] = Some(outcome);
                    }
                    None => break,
                }
            });
        }
    });

    results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|slot| slot.expect("every job ran"))
        .collect()
}
