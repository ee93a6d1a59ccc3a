//! `l`-Pirutka matrices.
//!
//! An `n x d` integer matrix `T` (with `n >= d`) is `l`-Pirutka when every
//! submatrix `T_{I,J}` with `J` nonempty and `|I| - |J| = n - d` has rank `|J|`
//! modulo `l`. The rows of such a matrix say which combinations of the divisors
//! `D_1, ..., D_d` to take `l`-th roots of in order to split ramification
//! along them.
//!
//! Besides the checker this module has an independent oracle for square
//! matrices (maximal minors of `(Id | T)`), exact bad-prime computation via
//! integer minors, a pruned exhaustive search in row-major lexicographic
//! order, the greedy column-by-column construction for large `l`, and the
//! exponent bookkeeping that turns an `n x (d+1)` matrix into a period-index
//! exponent `n + 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combin::Combinations;
use crate::zmodl::{det_mod, minor_gcd, rank_mod, IntMatrix, PrimeModulus, ZmodError};

/// Default cap on the size of an exhaustive search space.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PirutkaError {
    /// The candidate has fewer rows than columns.
    Shape { n: usize, d: usize },
    /// An operation that needs a square matrix got a rectangular one.
    NotSquare { n: usize, d: usize },
    /// A minor gcd has a prime factor above the factoring bound.
    BoundExceeded { gcd: u128, bound: u64 },
    /// The search space is larger than the configured budget.
    BudgetExceeded { space: u128, budget: u128 },
    /// A built-in name that is not recognized.
    UnknownBuiltin(String),
    /// A size parameter was zero.
    ZeroSize,
    Zmod(ZmodError),
}

impl fmt::Display for PirutkaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PirutkaError::Shape { n, d } => write!(f, "candidate must have n >= d >= 1, got {n}x{d}"),
            PirutkaError::NotSquare { n, d } => write!(f, "expected a square matrix, got {n}x{d}"),
            PirutkaError::BoundExceeded { gcd, bound } => {
                write!(f, "bound exceeded: minor gcd {gcd} has a prime factor above {bound}")
            }
            PirutkaError::BudgetExceeded { space, budget } => {
                write!(f, "budget exceeded: search space {space} is larger than budget {budget}")
            }
            PirutkaError::UnknownBuiltin(name) => write!(f, "unknown built-in matrix {name:?}"),
            PirutkaError::ZeroSize => write!(f, "sizes must be positive"),
            PirutkaError::Zmod(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for PirutkaError {}

impl From<ZmodError> for PirutkaError {
    fn from(e: ZmodError) -> Self {
        PirutkaError::Zmod(e)
    }
}

/// An integer `n x d` matrix with `n >= d >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PirutkaCandidate {
    matrix: IntMatrix,
}

impl PirutkaCandidate {
    pub fn new(matrix: IntMatrix) -> Result<Self, PirutkaError> {
        if matrix.rows() < matrix.cols() {
            return Err(PirutkaError::Shape {
                n: matrix.rows(),
                d: matrix.cols(),
            });
        }
        Ok(PirutkaCandidate { matrix })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, PirutkaError> {
        PirutkaCandidate::new(IntMatrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    /// Number of rows (rational functions `f_i`).
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of columns (divisors `D_j`).
    pub fn d(&self) -> usize {
        self.matrix.cols()
    }
}

/// A failing pair `(I, J)`, 1-based, with the rank of `T_{I,J}` mod `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: bool,
    pub witness: Option<Witness>,
}

/// Every `(J, I)` pair the definition quantifies over, 0-based, ordered by
/// `|J|`, then `J`, then `I` lexicographically.
pub fn required_subsets(n: usize, d: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (1..=d).flat_map(move |k| {
        Combinations::new(d, k).flat_map(move |cols| {
            Combinations::new(n, n - d + k).map(move |rows| (cols.clone(), rows))
        })
    })
}

/// Checks the Pirutka condition; on failure the witness is the least failing
/// `(J, I)` in the order of [`required_subsets`].
pub fn is_pirutka(c: &PirutkaCandidate, l: PrimeModulus) -> CheckReport {
    for (cols, rows) in required_subsets(c.n(), c.d()) {
        let rank = rank_mod(&c.matrix.submatrix(&rows, &cols), l);
        if rank < cols.len() {
            return CheckReport {
                verdict: false,
                witness: Some(Witness {
                    rows: rows.iter().map(|i| i + 1).collect(),
                    cols: cols.iter().map(|j| j + 1).collect(),
                    rank,
                }),
            };
        }
    }
    CheckReport {
        verdict: true,
        witness: None,
    }
}

/// For square `T`: true iff every maximal minor of `(Id_n | T)` is nonzero
/// mod `l`.
pub fn square_minor_oracle(c: &PirutkaCandidate, l: PrimeModulus) -> Result<bool, PirutkaError> {
    let n = c.n();
    if n != c.d() {
        return Err(PirutkaError::NotSquare { n, d: c.d() });
    }
    let a = IntMatrix::identity(n).hstack(&c.matrix)?;
    let rows: Vec<usize> = (0..n).collect();
    Ok(Combinations::new(2 * n, n)
        .all(|cols| det_mod(&a.submatrix(&rows, &cols), l) != Some(0)))
}

/// `d` vertically stacked copies of the `d x d` identity.
pub fn stacked_identity(d: usize) -> Result<PirutkaCandidate, PirutkaError> {
    if d == 0 {
        return Err(PirutkaError::ZeroSize);
    }
    let mut entries = Vec::with_capacity(d * d * d);
    for _ in 0..d {
        entries.extend_from_slice(IntMatrix::identity(d).entries());
    }
    PirutkaCandidate::new(IntMatrix::new(d * d, d, entries)?)
}

/// The named matrices shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// 3x3, Pirutka for every prime `l > 3`.
    Clever3x3,
    /// 4x3, Pirutka for every prime.
    AllPrimes4x3,
    /// `stacked_identity(d)`, Pirutka for every prime.
    Stacked(usize),
}

impl Builtin {
    pub fn parse(name: &str) -> Result<Builtin, PirutkaError> {
        match name {
            "clever3x3" => Ok(Builtin::Clever3x3),
            "allprimes4x3" => Ok(Builtin::AllPrimes4x3),
            _ => name
                .strip_prefix("stacked:")
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&d| d > 0)
                .map(Builtin::Stacked)
                .ok_or_else(|| PirutkaError::UnknownBuiltin(name.into())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Clever3x3 => "clever3x3".into(),
            Builtin::AllPrimes4x3 => "allprimes4x3".into(),
            Builtin::Stacked(d) => format!("stacked:{d}"),
        }
    }

    pub fn candidate(&self) -> PirutkaCandidate {
        match *self {
            Builtin::Clever3x3 => PirutkaCandidate::from_rows(&[[1, 3, 3], [1, 2, 1], [1, 1, 2]]),
            Builtin::AllPrimes4x3 => {
                PirutkaCandidate::from_rows(&[[1, 1, 1], [1, 1, 0], [0, 1, 1], [1, 2, 1]])
            }
            Builtin::Stacked(d) => stacked_identity(d),
        }
        .expect("built-in matrices are well formed")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadPrimeSet {
    /// Sorted, deduplicated.
    Finite(Vec<u64>),
    AllPrimes,
}

impl BadPrimeSet {
    pub fn contains(&self, l: u64) -> bool {
        match self {
            BadPrimeSet::Finite(ps) => ps.binary_search(&l).is_ok(),
            BadPrimeSet::AllPrimes => true,
        }
    }
}

/// The exact set of primes for which `c` fails to be Pirutka.
///
/// A prime is bad iff it divides the gcd of the maximal minors of some
/// required `T_{I,J}`. Gcds are factored by trial division up to
/// `search_bound`; a cofactor left over after that is an error.
pub fn bad_primes(c: &PirutkaCandidate, search_bound: u64) -> Result<BadPrimeSet, PirutkaError> {
    let mut primes: Vec<u64> = Vec::new();
    for (cols, rows) in required_subsets(c.n(), c.d()) {
        let g = minor_gcd(&c.matrix.submatrix(&rows, &cols))?;
        if g == 0 {
            return Ok(BadPrimeSet::AllPrimes);
        }
        let mut rest = g;
        let mut p: u64 = 2;
        while rest > 1 && p <= search_bound {
            if rest % p as u128 == 0 {
                primes.push(p);
                while rest % p as u128 == 0 {
                    rest /= p as u128;
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest > 1 {
            return Err(PirutkaError::BoundExceeded {
                gcd: g,
                bound: search_bound,
            });
        }
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(BadPrimeSet::Finite(primes))
}

/// Result of an exhaustive search.
///
/// `examined` counts candidates covered in lexicographic order, whether they
/// were checked individually or eliminated with a pruned prefix; it equals
/// `l^(nd)` when nothing is found and the 1-based rank of the found matrix
/// otherwise. `checked` counts complete candidates that reached a full check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<PirutkaCandidate>,
    pub examined: u128,
    pub checked: u128,
}

impl SearchOutcome {
    pub fn pruned(&self) -> u128 {
        self.examined - self.checked
    }
}

/// Outcome of searching the subtree below one fixed prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOutcome {
    pub found: Option<PirutkaCandidate>,
    pub examined: u128,
    pub checked: u128,
}

/// The space `{0, ..., l-1}^(n x d)` in row-major lexicographic order, with
/// prefix pruning.
///
/// Pruning only discards candidates that provably fail:
/// * a column may hold at most `n - d` zeros (the `|J| = 1` conditions);
/// * when a row `r` is complete, every required `(I, J)` with `max(I) = r`
///   only involves filled rows and is checked right away.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    n: usize,
    d: usize,
    l: PrimeModulus,
    row_checks: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

impl SearchSpace {
    pub fn new(n: usize, d: usize, l: PrimeModulus, budget: u128) -> Result<Self, PirutkaError> {
        if d == 0 || n < d {
            return Err(PirutkaError::Shape { n, d });
        }
        let space = (l.get() as u128)
            .checked_pow((n * d) as u32)
            .unwrap_or(u128::MAX);
        if space > budget {
            return Err(PirutkaError::BudgetExceeded { space, budget });
        }
        let mut row_checks = vec![Vec::new(); n];
        for (cols, rows) in required_subsets(n, d) {
            let last = *rows.last().expect("|I| >= 1");
            row_checks[last].push((rows, cols));
        }
        Ok(SearchSpace {
            n,
            d,
            l,
            row_checks,
        })
    }

    pub fn cells(&self) -> usize {
        self.n * self.d
    }

    pub fn size(&self) -> u128 {
        self.subtree_size(0)
    }

    fn subtree_size(&self, filled: usize) -> u128 {
        (self.l.get() as u128).pow((self.cells() - filled) as u32)
    }

    /// All prefixes of the first `depth` cells in lexicographic order.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<u64>> {
        let depth = depth.min(self.cells());
        let l = self.l.get();
        let mut out = vec![Vec::new()];
        for _ in 0..depth {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..l).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Searches every completion of `prefix`, stopping at the first passing
    /// matrix.
    pub fn search_prefix(&self, prefix: &[u64]) -> PartitionOutcome {
        let mut state = DfsState {
            grid: vec![0; self.cells()],
            examined: 0,
            checked: 0,
            found: None,
        };
        // Replay the prefix with the same checks the search applies.
        for (pos, &v) in prefix.iter().enumerate() {
            if !self.place(&mut state, pos, v % self.l.get()) {
                return PartitionOutcome {
                    found: None,
                    examined: self.subtree_size(prefix.len()),
                    checked: 0,
                };
            }
        }
        self.dfs(&mut state, prefix.len());
        PartitionOutcome {
            found: state.found,
            examined: state.examined,
            checked: state.checked,
        }
    }

    /// Merges partition outcomes given in lexicographic order of their
    /// prefixes into the result of a single sequential search.
    pub fn merge(outcomes: impl IntoIterator<Item = PartitionOutcome>) -> SearchOutcome {
        let mut total = SearchOutcome {
            found: None,
            examined: 0,
            checked: 0,
        };
        for o in outcomes {
            total.examined += o.examined;
            total.checked += o.checked;
            if o.found.is_some() {
                total.found = o.found;
                break;
            }
        }
        total
    }

    /// Places value `v` at cell `pos` (cells before `pos` already filled) and
    /// reports whether the prefix survives pruning.
    fn place(&self, st: &mut DfsState, pos: usize, v: u64) -> bool {
        let (r, c) = (pos / self.d, pos % self.d);
        st.grid[pos] = v;
        let zeros = (0..=r).filter(|&i| st.grid[i * self.d + c] == 0).count();
        if zeros > self.n - self.d {
            return false;
        }
        if c + 1 == self.d {
            return self.row_checks[r]
                .iter()
                .all(|(rows, cols)| residue_rank(&st.grid, self.d, rows, cols, self.l) == cols.len());
        }
        true
    }

    fn dfs(&self, st: &mut DfsState, pos: usize) {
        if pos == self.cells() {
            st.checked += 1;
            st.examined += 1;
            let m = IntMatrix::new(
                self.n,
                self.d,
                st.grid.iter().map(|&x| x as i64).collect(),
            )
            .expect("search grid shape");
            let c = PirutkaCandidate::new(m).expect("n >= d");
            if is_pirutka(&c, self.l).verdict {
                st.found = Some(c);
            }
            return;
        }
        for v in 0..self.l.get() {
            if self.place(st, pos, v) {
                self.dfs(st, pos + 1);
                if st.found.is_some() {
                    return;
                }
            } else {
                st.examined += self.subtree_size(pos + 1);
            }
        }
    }
}

struct DfsState {
    grid: Vec<u64>,
    examined: u128,
    checked: u128,
    found: Option<PirutkaCandidate>,
}

fn residue_rank(grid: &[u64], d: usize, rows: &[usize], cols: &[usize], l: PrimeModulus) -> usize {
    let entries = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| grid[i * d + j] as i64))
        .collect();
    rank_mod(
        &IntMatrix::new(rows.len(), cols.len(), entries).expect("nonempty submatrix"),
        l,
    )
}

/// Sequential exhaustive search for the least `l`-Pirutka `n x d` matrix with
/// entries in `0..l`.
pub fn exhaustive_search(
    n: usize,
    d: usize,
    l: PrimeModulus,
    budget: u128,
) -> Result<SearchOutcome, PirutkaError> {
    let space = SearchSpace::new(n, d, l, budget)?;
    Ok(SearchSpace::merge([space.search_prefix(&[])]))
}

/// Builds an `n x n` `l`-Pirutka matrix one column at a time, taking at each
/// step the lexicographically least column in `{0..l-1}^n` that keeps every
/// maximal minor of `(Id_n | t_1 ... t_k)` through the new column nonzero mod
/// `l`, backtracking when no column fits. `budget` caps the number of column
/// vectors tried.
///
/// Always succeeds when `l > C(2n-1, n)`.
pub fn greedy_construct(
    n: usize,
    l: PrimeModulus,
    budget: u128,
) -> Result<Option<PirutkaCandidate>, PirutkaError> {
    if n == 0 {
        return Err(PirutkaError::ZeroSize);
    }
    let mut g = Greedy {
        n,
        l,
        columns: Vec::new(),
        tried: 0,
        budget,
    };
    if !g.extend()? {
        return Ok(None);
    }
    let mut entries = vec![0i64; n * n];
    for (k, col) in g.columns.iter().enumerate() {
        for i in 0..n {
            entries[i * n + k] = col[i] as i64;
        }
    }
    Ok(Some(PirutkaCandidate::new(IntMatrix::new(n, n, entries)?)?))
}

struct Greedy {
    n: usize,
    l: PrimeModulus,
    columns: Vec<Vec<u64>>,
    tried: u128,
    budget: u128,
}

impl Greedy {
    fn extend(&mut self) -> Result<bool, PirutkaError> {
        if self.columns.len() == self.n {
            return Ok(true);
        }
        // Columns with a zero entry are skipped: together with n-1 identity
        // columns they give a vanishing minor.
        let mut t = vec![1u64; self.n];
        loop {
            self.tried += 1;
            if self.tried > self.budget {
                return Err(PirutkaError::BudgetExceeded {
                    space: self.tried,
                    budget: self.budget,
                });
            }
            if self.admissible(&t) {
                self.columns.push(t.clone());
                if self.extend()? {
                    return Ok(true);
                }
                self.columns.pop();
            }
            if !next_nonzero_vector(&mut t, self.l.get()) {
                return Ok(false);
            }
        }
    }

    fn admissible(&self, t: &[u64]) -> bool {
        let n = self.n;
        // existing columns: e_1..e_n then t_1..t_k
        let existing = n + self.columns.len();
        let column = |idx: usize, i: usize| -> i64 {
            if idx < n {
                (idx == i) as i64
            } else {
                self.columns[idx - n][i] as i64
            }
        };
        Combinations::new(existing, n - 1).all(|others| {
            let mut entries = Vec::with_capacity(n * n);
            for i in 0..n {
                for &o in &others {
                    entries.push(column(o, i));
                }
                entries.push(t[i] as i64);
            }
            let m = IntMatrix::new(n, n, entries).expect("square minor");
            det_mod(&m, self.l) != Some(0)
        })
    }
}

/// Advances `t` to the next vector of `{1..l-1}^n` in lexicographic order.
fn next_nonzero_vector(t: &mut [u64], l: u64) -> bool {
    for i in (0..t.len()).rev() {
        if t[i] + 1 < l {
            t[i] += 1;
            for x in &mut t[i + 1..] {
                *x = 1;
            }
            return true;
        }
    }
    false
}

/// The period-index exponent `N + 1` obtained from the shortest built-in
/// `l`-Pirutka matrix with `d + 1` columns, where `N` is its number of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundExponent {
    pub exponent: usize,
    pub matrix: Builtin,
}

pub fn bound_exponent(l: PrimeModulus, d: usize) -> Result<BoundExponent, PirutkaError> {
    if d == 0 {
        return Err(PirutkaError::ZeroSize);
    }
    let cols = d + 1;
    let best = [Builtin::Clever3x3, Builtin::AllPrimes4x3, Builtin::Stacked(cols)]
        .into_iter()
        .map(|b| (b, b.candidate()))
        .filter(|(_, c)| c.d() == cols && is_pirutka(c, l).verdict)
        .min_by_key(|(_, c)| c.n())
        .expect("stacked identity is Pirutka for every prime");
    Ok(BoundExponent {
        exponent: best.1.n() + 1,
        matrix: best.0,
    })
}
