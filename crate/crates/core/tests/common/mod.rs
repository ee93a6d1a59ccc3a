#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ramsplit_core::pirutka::PirutkaCandidate;
use ramsplit_core::simplicial::{simplex, Simplex, SimplicialComplex};

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Random complex on at most `max_vertices` vertices with facets of at most
/// `max_dim + 1` vertices.
pub fn random_complex(rng: &mut ChaCha8Rng, max_vertices: usize, max_dim: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices);
    let pool = names(n);
    let count = rng.gen_range(1..=6);
    let facets = (0..count).map(|_| {
        let size = rng.gen_range(1..=(max_dim + 1).min(n));
        let mut picked: Vec<&String> = Vec::new();
        while picked.len() < size {
            let v = &pool[rng.gen_range(0..n)];
            if !picked.contains(&v) {
                picked.push(v);
            }
        }
        simplex(&picked)
    });
    SimplicialComplex::from_facets(facets.collect::<Vec<Simplex>>()).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: i64, hi: i64) -> PirutkaCandidate {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect();
    PirutkaCandidate::from_rows(&rows).unwrap()
}

/// All matrices with entries in `0..l`, row-major lexicographic.
pub fn all_matrices(n: usize, d: usize, l: u64) -> impl Iterator<Item = PirutkaCandidate> {
    let cells = n * d;
    let total = (l as usize).pow(cells as u32);
    (0..total).map(move |mut k| {
        let mut entries = vec![0i64; cells];
        for e in entries.iter_mut().rev() {
            *e = (k % l as usize) as i64;
            k /= l as usize;
        }
        let rows: Vec<&[i64]> = entries.chunks(d).collect();
        PirutkaCandidate::from_rows(&rows).unwrap()
    })
}
