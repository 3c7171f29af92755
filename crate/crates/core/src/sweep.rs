//! Order-preserving maps over independent work items.
//!
//! Every prime in a sweep (and every exponent vector in a point search) is
//! an independent item. [`Execution`] picks how they are run; results always
//! come back in input order, so output is identical either way.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    /// rayon, on the global pool or on a local pool of `jobs` threads.
    /// Runs sequentially when the `parallel` feature is off.
    Parallel { jobs: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { jobs: None }
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn with_jobs(jobs: Option<usize>) -> Execution {
        match jobs {
            Some(1) => Execution::Sequential,
            _ => Execution::Parallel { jobs },
        }
    }

    /// Whether items will actually run on more than one thread.
    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && matches!(self, Execution::Parallel { .. })
    }

    /// `items.map(f)`, in input order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel { jobs } => parallel_map(items, f, *jobs),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], f: F, jobs: Option<usize>) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], f: F, _jobs: Option<usize>) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}
