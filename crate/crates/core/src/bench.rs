//! Timing of `blast` and of checking its certificate on the implication
//! chains produced by [`gen_chain_task`].

use std::time::Instant;

use thiserror::Error;

use crate::cert::{elaborate, ElabError};
use crate::checker::ccheck;
use crate::syntax::print_kernel;
use crate::task::{gen_chain_task, TaskError};
use crate::transforms::{t_blast, TransformError};

/// Chain lengths measured by default.
pub const LADDER: [usize; 7] = [5, 10, 15, 20, 25, 50, 100];

pub const CSV_HEADER: [&str; 4] = ["n", "transform_s", "cert_bytes", "check_s"];

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    /// Running `blast`, which builds the surface certificate.
    pub transform_s: f64,
    /// Length of the printed kernel certificate.
    pub cert_bytes: usize,
    /// Elaborating and checking the certificate.
    pub check_s: f64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Elab(#[from] ElabError),
    #[error("the checker rejected the certificate: {0}")]
    Check(String),
    #[error("blast left {0} task(s) open")]
    Open(usize),
}

/// The default ladder up to `max_n`, continued by doubling, ending at
/// `max_n` itself.
pub fn ladder(max_n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = LADDER.iter().copied().filter(|n| *n <= max_n).collect();
    let mut n = 200;
    while n <= max_n {
        out.push(n);
        n *= 2;
    }
    if out.last() != Some(&max_n) && max_n > 0 {
        out.push(max_n);
    }
    out
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// Median timings over `runs` runs (at least one) for the chain of length `n`.
pub fn bench_chain(n: usize, runs: usize) -> Result<BenchRow, BenchError> {
    let task = gen_chain_task(n)?;
    let mut transform = Vec::new();
    let mut check = Vec::new();
    let mut cert_bytes = 0;
    for _ in 0..runs.max(1) {
        let start = Instant::now();
        let out = t_blast().apply(&task)?;
        transform.push(start.elapsed().as_secs_f64());
        if !out.tasks.is_empty() {
            return Err(BenchError::Open(out.tasks.len()));
        }
        let start = Instant::now();
        let kernel = elaborate(&out.cert, &task)?;
        let report = ccheck(&kernel, &task);
        check.push(start.elapsed().as_secs_f64());
        if let Some(f) = report.failure {
            return Err(BenchError::Check(f.to_string()));
        }
        cert_bytes = print_kernel(&kernel).len();
    }
    Ok(BenchRow {
        n,
        transform_s: median(transform),
        cert_bytes,
        check_s: median(check),
    })
}

/// Runs `f` on a thread with a large stack; certificates of long chains
/// are deep trees.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(f)
        .expect("spawn worker thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}
