//! Level-by-level enumeration into a [`Store`].
//!
//! Level `n` is built from the sealed level `n - 1`: each parent is decoded,
//! grown by one leaf at every vertex, and each child is canonized. The first
//! worker to claim a child's code computes its record and hands it to the
//! writer; later copies are dropped. A level is sealed only once all of its
//! records are in, which makes a whole level the unit of resume.

use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use dashmap::DashSet;
use thiserror::Error;
use treepoly_core::enumerate::{ExpandError, PlanError};
use treepoly_core::{
    expand_code, independence_polynomial, CanonicalCode, LevelPlan, PolyError, Tree, TreeRecord,
};

use crate::cache::SharedCache;
use crate::store::{Store, StoreError, MAX_LEVEL};

pub const DEFAULT_HARD_CAP: usize = 22;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("coefficient overflow while computing a polynomial: {0}")]
    Overflow(#[from] PolyError),
    #[error("cannot expand a stored tree: {0}")]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("level {0} is not sealed; build it first")]
    LevelIncomplete(usize),
    #[error("level {n}: enumerated {found} distinct trees, expected {expected}")]
    CountMismatch { n: usize, found: u64, expected: u64 },
    #[error("max n {max_n} exceeds the hard cap {hard_cap}")]
    AboveHardCap { max_n: usize, hard_cap: usize },
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("a worker thread panicked")]
    WorkerPanicked,
}

type Result<T, E = PipelineError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub max_n: usize,
    pub workers: usize,
    pub hard_cap: usize,
    /// Print one line per sealed level to stderr.
    pub progress: bool,
}

impl RunOptions {
    pub fn new(max_n: usize, workers: usize) -> Self {
        RunOptions {
            max_n,
            workers,
            hard_cap: DEFAULT_HARD_CAP,
            progress: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub n: usize,
    pub count: u64,
    /// False when the level was already sealed and got skipped.
    pub built: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub levels: Vec<LevelReport>,
}

impl RunSummary {
    /// Trees with at least one vertex.
    pub fn total_without_empty(&self) -> u64 {
        self.levels
            .iter()
            .filter(|l| l.n >= 1)
            .map(|l| l.count)
            .sum()
    }

    pub fn total_with_empty(&self) -> u64 {
        self.levels.iter().map(|l| l.count).sum()
    }

    pub fn new_records(&self) -> u64 {
        self.levels
            .iter()
            .filter(|l| l.built)
            .map(|l| l.count)
            .sum()
    }

    pub fn all_skipped(&self) -> bool {
        self.levels.iter().all(|l| !l.built)
    }
}

/// Builds and seals level `plan.n()`, returning its number of trees.
///
/// Parents are split into `workers` contiguous chunks. Workers share the
/// dedup set and the cache; records flow to the calling thread, which is
/// the only one appending to the store.
pub fn enumerate_level(
    plan: &LevelPlan,
    store: &Store,
    cache: &SharedCache<'_>,
    workers: usize,
) -> Result<u64> {
    if workers == 0 {
        return Err(PipelineError::NoWorkers);
    }
    let n = plan.n();
    if n == 0 || !store.is_sealed(n - 1)? {
        return Err(PipelineError::LevelIncomplete(n.saturating_sub(1)));
    }
    store.reset_level(n)?;

    let seen: DashSet<CanonicalCode> = DashSet::new();
    let parents = plan.parent_codes();
    let chunk = parents.len().div_ceil(workers).max(1);
    let (tx, rx) = mpsc::sync_channel::<TreeRecord>(4096);

    let write_result = thread::scope(|scope| {
        let handles: Vec<_> = parents
            .chunks(chunk)
            .map(|shard| {
                let tx = tx.clone();
                let seen = &seen;
                scope.spawn(move || -> Result<()> {
                    for parent in shard {
                        for child in expand_code(parent)? {
                            if !seen.insert(child.code.clone()) {
                                continue;
                            }
                            let rec = build_record(child.code, &child.tree, cache)?;
                            if tx.send(rec).is_err() {
                                // Writer gave up; its error is reported.
                                return Ok(());
                            }
                        }
                    }
                    Ok(())
                })
            })
            .collect();
        drop(tx);

        let mut write_result = Ok(());
        for rec in rx {
            if let Err(e) = store.insert_if_absent(rec) {
                write_result = Err(PipelineError::from(e));
                break;
            }
        }
        for handle in handles {
            handle.join().map_err(|_| PipelineError::WorkerPanicked)??;
        }
        write_result
    });
    write_result?;

    let found = seen.len() as u64;
    if let Some(expected) = plan.expected_count() {
        if found != expected {
            return Err(PipelineError::CountMismatch { n, found, expected });
        }
    }
    store.seal_level(n, plan.expected_count())?;
    Ok(found)
}

fn build_record(code: CanonicalCode, tree: &Tree, cache: &SharedCache<'_>) -> Result<TreeRecord> {
    let poly = independence_polynomial(tree, cache)?;
    Ok(TreeRecord::from_parts(code, tree, poly))
}

fn seed(store: &Store, n: usize, rec: TreeRecord) -> Result<()> {
    if !store.is_sealed(n)? {
        store.reset_level(n)?;
        store.insert_if_absent(rec)?;
        store.seal_level(n, Some(1))?;
    }
    Ok(())
}

/// Builds every level up to `options.max_n`, skipping sealed ones.
///
/// The empty tree and the single vertex are inserted directly; everything
/// else is grown from the level below. Rerunning a finished store changes
/// nothing.
pub fn run(options: &RunOptions, store: &Store) -> Result<RunSummary> {
    if options.workers == 0 {
        return Err(PipelineError::NoWorkers);
    }
    if options.max_n > options.hard_cap || options.max_n > MAX_LEVEL {
        return Err(PipelineError::AboveHardCap {
            max_n: options.max_n,
            hard_cap: options.hard_cap.min(MAX_LEVEL),
        });
    }
    let mut summary = RunSummary::default();
    let cache = SharedCache::backed_by(store);

    for (n, tree) in [(0, Tree::empty()), (1, Tree::single())] {
        let started = Instant::now();
        let built = !store.is_sealed(n)?;
        let rec = TreeRecord::from_parts(
            treepoly_core::free_code(&tree),
            &tree,
            independence_polynomial(&tree, &cache)?,
        );
        seed(store, n, rec)?;
        summary.levels.push(LevelReport {
            n,
            count: 1,
            built,
            elapsed: started.elapsed(),
        });
        if built {
            progress(options, n, 1, started.elapsed());
        }
    }

    for n in 2..=options.max_n {
        let started = Instant::now();
        if let Some(manifest) = store.manifest(n)?.filter(|m| m.sealed) {
            summary.levels.push(LevelReport {
                n,
                count: manifest.record_count,
                built: false,
                elapsed: Duration::ZERO,
            });
            continue;
        }
        let plan = LevelPlan::with_reference_count(n, store.level_codes(n - 1)?)?;
        let count = enumerate_level(&plan, store, &cache, options.workers)?;
        let elapsed = started.elapsed();
        progress(options, n, count, elapsed);
        summary.levels.push(LevelReport {
            n,
            count,
            built: true,
            elapsed,
        });
    }
    Ok(summary)
}

fn progress(options: &RunOptions, n: usize, count: u64, elapsed: Duration) {
    if options.progress {
        eprintln!(
            "level {n}: {count} trees sealed in {:.3}s",
            elapsed.as_secs_f64()
        );
    }
}
