//! Seeded random inputs for property drivers and corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramsplit_core::simplicial::{simplex, SimplicialComplex};
use ramsplit_core::splitting::SymbolClass;
use ramsplit_core::zmodl::PrimeModulus;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A complex on `v0, v1, ...` with at most `max_vertices` vertices, one to
/// six random facets, and dimension at most `max_dim`.
pub fn random_complex(rng: &mut ChaCha8Rng, max_vertices: usize, max_dim: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let pool: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let count = rng.gen_range(1..=6);
    let facets: Vec<_> = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=(max_dim + 1).min(n));
            let picked: Vec<&String> = pool.choose_multiple(rng, size).collect();
            simplex(&picked)
        })
        .collect();
    SimplicialComplex::from_facets(facets).expect("nonempty facets")
}

pub fn random_corpus(seed: u64, count: usize, max_vertices: usize, max_dim: usize) -> Vec<SimplicialComplex> {
    let mut r = rng(seed);
    (0..count).map(|_| random_complex(&mut r, max_vertices, max_dim)).collect()
}

/// A class over `d` coordinates with up to `d` unit terms (tokens `u1..u3`
/// and `-1`) and random pair terms.
pub fn random_class(rng: &mut ChaCha8Rng, l: PrimeModulus, d: usize) -> SymbolClass {
    let tokens = ["u1", "u2", "u3", "-1"];
    let units: Vec<(String, usize, i64)> = (0..rng.gen_range(0..=d))
        .map(|_| {
            let u = tokens[rng.gen_range(0..tokens.len())].to_string();
            (u, rng.gen_range(1..=d), rng.gen_range(0..l.get() as i64))
        })
        .collect();
    let pairs: Vec<(usize, usize, i64)> = (0..rng.gen_range(0..=d))
        .map(|_| (rng.gen_range(1..=d), rng.gen_range(1..=d), rng.gen_range(0..l.get() as i64)))
        .collect();
    SymbolClass::from_terms(l, d, units, pairs).expect("coordinates in range")
}
