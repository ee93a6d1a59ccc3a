mod common;

use common::{all_matrices, random_matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ramsplit_core::pirutka::{
    bad_primes, exhaustive_search, greedy_construct, is_pirutka, required_subsets, square_minor_oracle,
    BadPrimeSet, Builtin, PirutkaCandidate, SearchSpace, DEFAULT_BUDGET,
};
use ramsplit_core::zmodl::{is_prime, minor_gcd, rank_mod, IntMatrix, PrimeModulus};
use ramsplit_core::Combinations;

fn p(l: u64) -> PrimeModulus {
    PrimeModulus::new(l).unwrap()
}

fn laplace(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * laplace(&minor)
        })
        .sum()
}

/// Rank as the largest order of a minor nonzero mod `l`, each minor by
/// cofactor expansion.
fn rank_by_minors(m: &IntMatrix, l: u64) -> usize {
    let max = m.rows().min(m.cols());
    (1..=max)
        .rev()
        .find(|&k| {
            Combinations::new(m.rows(), k).any(|rows| {
                Combinations::new(m.cols(), k).any(|cols| {
                    let sub: Vec<Vec<i128>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| m.get(i, j) as i128).collect())
                        .collect();
                    laplace(&sub).rem_euclid(l as i128) != 0
                })
            })
        })
        .unwrap_or(0)
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..7, r * c).prop_map(move |e| IntMatrix::new(r, c, e).unwrap())
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(11)]
}

fn candidate(max_rows: usize) -> impl Strategy<Value = PirutkaCandidate> {
    (1usize..4).prop_flat_map(move |d| {
        (d..=max_rows.max(d)).prop_flat_map(move |n| {
            proptest::collection::vec(-5i64..6, n * d).prop_map(move |e| {
                PirutkaCandidate::new(IntMatrix::new(n, d, e).unwrap()).unwrap()
            })
        })
    })
}

proptest! {
    #[test]
    fn rank_matches_minor_oracle(m in matrix(), l in prime()) {
        prop_assert_eq!(rank_mod(&m, p(l)), rank_by_minors(&m, l));
    }

    #[test]
    fn full_rank_iff_minor_gcd_is_a_unit(m in matrix(), l in prime()) {
        prop_assume!(m.rows() >= m.cols());
        let g = minor_gcd(&m).unwrap();
        prop_assert_eq!(rank_mod(&m, p(l)) == m.cols(), g % l as u128 != 0);
    }

    #[test]
    fn verdict_depends_only_on_residues(c in candidate(5), l in prime(), shift in proptest::collection::vec(-3i64..4, 25)) {
        let m = c.matrix();
        let entries: Vec<i64> = m.entries().iter().zip(&shift).map(|(x, s)| x + s * l as i64).collect();
        let moved = PirutkaCandidate::new(IntMatrix::new(m.rows(), m.cols(), entries).unwrap()).unwrap();
        prop_assert_eq!(is_pirutka(&c, p(l)).verdict, is_pirutka(&moved, p(l)).verdict);
    }

    #[test]
    fn verdict_invariant_under_permutations(c in candidate(5), l in prime(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = c.matrix();
        let mut rows: Vec<usize> = (0..m.rows()).collect();
        let mut cols: Vec<usize> = (0..m.cols()).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let permuted = PirutkaCandidate::new(m.submatrix(&rows, &cols)).unwrap();
        prop_assert_eq!(is_pirutka(&c, p(l)).verdict, is_pirutka(&permuted, p(l)).verdict);
    }

    #[test]
    fn witness_is_a_rank_drop(c in candidate(5), l in prime()) {
        let report = is_pirutka(&c, p(l));
        prop_assert_eq!(report.verdict, report.witness.is_none());
        if let Some(w) = report.witness {
            let rows: Vec<usize> = w.rows.iter().map(|i| i - 1).collect();
            let cols: Vec<usize> = w.cols.iter().map(|j| j - 1).collect();
            let sub = c.matrix().submatrix(&rows, &cols);
            prop_assert_eq!(rank_mod(&sub, p(l)), w.rank);
            prop_assert!(w.rank < cols.len());
            prop_assert_eq!(rows.len() - cols.len(), c.n() - c.d());
        }
    }
}

#[test]
fn required_subsets_have_the_right_shape() {
    for (n, d) in [(2, 2), (3, 2), (4, 3), (5, 3)] {
        let all: Vec<_> = required_subsets(n, d).collect();
        let expected: usize = (1..=d)
            .map(|k| Combinations::new(d, k).count() * Combinations::new(n, n - d + k).count())
            .sum();
        assert_eq!(all.len(), expected);
        for (cols, rows) in all {
            assert_eq!(rows.len() - cols.len(), n - d);
        }
    }
}

#[test]
fn square_oracle_agrees_on_small_matrices() {
    for (n, l) in [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3), (2, 5), (3, 2), (3, 3)] {
        for c in all_matrices(n, n, l) {
            assert_eq!(
                is_pirutka(&c, p(l)).verdict,
                square_minor_oracle(&c, p(l)).unwrap(),
                "{:?} mod {l}",
                c.matrix().to_rows()
            );
        }
    }
}

#[test]
fn square_oracle_agrees_on_random_larger_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        for n in [4, 5] {
            let c = random_matrix(&mut rng, n, n, -3, 3);
            for l in [2, 3, 5, 7] {
                assert_eq!(is_pirutka(&c, p(l)).verdict, square_minor_oracle(&c, p(l)).unwrap());
            }
        }
    }
}

#[test]
fn bad_primes_match_direct_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut samples: Vec<PirutkaCandidate> = [Builtin::Clever3x3, Builtin::AllPrimes4x3, Builtin::Stacked(3)]
        .iter()
        .map(Builtin::candidate)
        .collect();
    for _ in 0..40 {
        samples.push(random_matrix(&mut rng, 4, 3, -4, 4));
        samples.push(random_matrix(&mut rng, 3, 3, -4, 4));
    }
    for c in samples {
        let bad = bad_primes(&c, 1 << 20).unwrap();
        for l in (2..=50).filter(|&x| is_prime(x)) {
            assert_eq!(bad.contains(l), !is_pirutka(&c, p(l)).verdict, "{:?} at {l}", c.matrix().to_rows());
        }
        if let BadPrimeSet::Finite(ps) = &bad {
            assert!(ps.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn partitions_merge_to_the_sequential_result() {
    for (n, d, l) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (3, 3, 2), (3, 2, 3)] {
        let whole = exhaustive_search(n, d, p(l), DEFAULT_BUDGET).unwrap();
        let space = SearchSpace::new(n, d, p(l), DEFAULT_BUDGET).unwrap();
        for depth in 0..=space.cells().min(4) {
            let parts = space.prefixes(depth).into_iter().map(|pre| space.search_prefix(&pre));
            assert_eq!(SearchSpace::merge(parts), whole);
        }
    }
}

#[test]
fn search_finds_the_least_matrix() {
    // the search result must be the first Pirutka matrix in lex order
    for (n, d, l) in [(2, 2, 3), (3, 2, 3), (2, 1, 2), (3, 2, 5)] {
        let out = exhaustive_search(n, d, p(l), DEFAULT_BUDGET).unwrap();
        let first = all_matrices(n, d, l).position(|c| is_pirutka(&c, p(l)).verdict);
        match (first, out.found) {
            (Some(k), Some(c)) => {
                assert_eq!(out.examined, k as u128 + 1);
                assert!(is_pirutka(&c, p(l)).verdict);
                assert_eq!(all_matrices(n, d, l).nth(k).unwrap(), c);
            }
            (None, None) => assert_eq!(out.examined, (l as u128).pow((n * d) as u32)),
            other => panic!("mismatch {other:?}"),
        }
    }
}

#[test]
fn greedy_outputs_are_pirutka() {
    for (n, l) in [(1, 2), (2, 5), (2, 7), (3, 11), (3, 13)] {
        let c = greedy_construct(n, p(l), DEFAULT_BUDGET).unwrap().unwrap();
        assert!(is_pirutka(&c, p(l)).verdict);
        assert!(square_minor_oracle(&c, p(l)).unwrap());
    }
}
