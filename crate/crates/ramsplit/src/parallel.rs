//! Work-partitioned versions of the exhaustive operations. Results do not
//! depend on the number of workers.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use ramsplit_core::pirutka::{PartitionOutcome, PirutkaError, SearchOutcome, SearchSpace};
use ramsplit_core::splitting::{find_certificate, split_points, SplitAttempt, UniversalReport};
use ramsplit_core::pirutka::PirutkaCandidate;
use ramsplit_core::zmodl::PrimeModulus;

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

/// Prefix length giving at least `16 * workers` partitions.
fn split_depth(space: &SearchSpace, l: u64, workers: usize) -> usize {
    let target = 16 * workers.max(1) as u128;
    let mut depth = 0;
    let mut parts: u128 = 1;
    while parts < target && depth < space.cells() {
        parts *= l as u128;
        depth += 1;
    }
    depth
}

/// Exhaustive search over `workers` threads. `progress` is called with the
/// number of finished partitions and the total.
pub fn parallel_search(
    n: usize,
    d: usize,
    l: PrimeModulus,
    budget: u128,
    workers: usize,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<SearchOutcome, PirutkaError> {
    let space = SearchSpace::new(n, d, l, budget)?;
    let prefixes = space.prefixes(split_depth(&space, l.get(), workers));
    let total = prefixes.len();
    let first_found = AtomicUsize::new(usize::MAX);
    let done = AtomicUsize::new(0);
    let outcomes: Vec<PartitionOutcome> = pool(workers).install(|| {
        prefixes
            .par_iter()
            .enumerate()
            .map(|(k, prefix)| {
                // partitions after a success never reach the merge
                let out = if k > first_found.load(Ordering::Relaxed) {
                    PartitionOutcome { found: None, examined: 0, checked: 0 }
                } else {
                    let out = space.search_prefix(prefix);
                    if out.found.is_some() {
                        first_found.fetch_min(k, Ordering::Relaxed);
                    }
                    out
                };
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(report) = progress {
                    report(finished, total);
                }
                out
            })
            .collect()
    });
    Ok(SearchSpace::merge(outcomes))
}

pub fn parallel_universal_split_check(t: &PirutkaCandidate, l: PrimeModulus, workers: usize) -> UniversalReport {
    let points = split_points(t.n(), t.d());
    let attempts = pool(workers).install(|| {
        points
            .into_par_iter()
            .map(|(point, j0)| {
                let outcome = find_certificate(t, l, &point, j0);
                SplitAttempt { point, j0, outcome }
            })
            .collect()
    });
    UniversalReport { attempts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ramsplit_core::pirutka::{exhaustive_search, Builtin, DEFAULT_BUDGET};
    use ramsplit_core::splitting::universal_split_check;

    fn p(l: u64) -> PrimeModulus {
        PrimeModulus::new(l).unwrap()
    }

    #[test]
    fn worker_count_does_not_matter() {
        for (n, d, l) in [(2, 2, 2), (2, 2, 3), (3, 2, 3), (3, 3, 2), (3, 2, 5)] {
            let seq = exhaustive_search(n, d, p(l), DEFAULT_BUDGET).unwrap();
            for w in [1, 2, 3, 8] {
                assert_eq!(parallel_search(n, d, p(l), DEFAULT_BUDGET, w, None).unwrap(), seq);
            }
        }
    }

    #[test]
    fn universal_matches_sequential() {
        for (b, l) in [(Builtin::AllPrimes4x3, 3), (Builtin::Clever3x3, 2)] {
            let c = b.candidate();
            assert_eq!(parallel_universal_split_check(&c, p(l), 4), universal_split_check(&c, p(l)));
        }
    }
}
