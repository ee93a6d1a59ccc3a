//! Exact linear algebra over `Z` and `Z/l`.
//!
//! Everything here works on small dense matrices with exact integer
//! arithmetic. Residues are kept in `0..l` as `u64`; moduli are restricted to
//! primes below `2^32` so that products of residues never overflow.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combin::Combinations;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZmodError {
    /// The entry array does not have `rows * cols` cells, or a dimension is 0.
    Shape { rows: usize, cols: usize, len: usize },
    /// Rows of different lengths were supplied.
    Ragged,
    /// The requested modulus is not a prime below `2^32`.
    NotPrime(u64),
    /// An operand has the wrong dimension for the operation.
    DimensionMismatch { expected: usize, found: usize },
    /// `minor_gcd` requires at least as many rows as columns.
    TooFewRows { rows: usize, cols: usize },
    /// Exact integer arithmetic left the `i128` range.
    Overflow,
}

impl fmt::Display for ZmodError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZmodError::Shape { rows, cols, len } => {
                write!(f, "matrix of shape {rows}x{cols} cannot hold {len} entries")
            }
            ZmodError::Ragged => write!(f, "matrix rows have different lengths"),
            ZmodError::NotPrime(l) => write!(f, "{l} is not a prime below 2^32"),
            ZmodError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            ZmodError::TooFewRows { rows, cols } => {
                write!(f, "need rows >= cols, got {rows}x{cols}")
            }
            ZmodError::Overflow => write!(f, "integer overflow in exact arithmetic"),
        }
    }
}

impl core::error::Error for ZmodError {}

/// Dense row-major integer matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, ZmodError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(ZmodError::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, ZmodError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(ZmodError::Ragged);
        }
        let entries = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix::new(n, n, entries).expect("identity of positive size")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Submatrix on the given 0-based rows and columns, in the order given.
    /// Both index lists must be nonempty.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j)))
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, ZmodError> {
        if self.rows != other.rows {
            return Err(ZmodError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        IntMatrix::new(self.rows, self.cols + other.cols, entries)
    }

    /// Entry-wise reduction into `0..l`.
    pub fn reduce_mod(&self, l: PrimeModulus) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| l.reduce(x) as i64).collect(),
        }
    }

    fn residues(&self, l: PrimeModulus) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.cols)
            .map(|r| r.iter().map(|&x| l.reduce(x)).collect())
            .collect()
    }
}

/// A prime `l` with `2 <= l < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(l: u64) -> Result<Self, ZmodError> {
        if l <= u32::MAX as u64 && is_prime(l) {
            Ok(PrimeModulus(l))
        } else {
            Err(ZmodError::NotPrime(l))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.0 != 0);
        // Fermat: a^(l-2)
        let mut base = a % self.0;
        let mut exp = self.0 - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

/// Reduces `m` (with `ncoef` coefficient columns, any extra columns are carried
/// along) to reduced row echelon form in place. Returns the pivot columns.
fn rref(m: &mut [Vec<u64>], ncoef: usize, l: PrimeModulus) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncoef {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = l.inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = l.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..m[r].len() {
                    let sub = l.mul(factor, m[row][c]);
                    m[r][c] = l.sub(m[r][c], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of `m` reduced mod `l`.
pub fn rank_mod(m: &IntMatrix, l: PrimeModulus) -> usize {
    let mut res = m.residues(l);
    rref(&mut res, m.cols, l).len()
}

/// Determinant of a square matrix mod `l`; `None` if `m` is not square.
pub fn det_mod(m: &IntMatrix, l: PrimeModulus) -> Option<u64> {
    if m.rows != m.cols {
        return None;
    }
    let mut a = m.residues(l);
    let n = m.rows;
    let mut det = 1u64;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| a[r][col] != 0) else {
            return Some(0);
        };
        if p != col {
            a.swap(p, col);
            det = l.sub(0, det);
        }
        det = l.mul(det, a[col][col]);
        let inv = l.inv(a[col][col]);
        for r in col + 1..n {
            if a[r][col] != 0 {
                let factor = l.mul(a[r][col], inv);
                for c in col..n {
                    let sub = l.mul(factor, a[col][c]);
                    a[r][c] = l.sub(a[r][c], sub);
                }
            }
        }
    }
    Some(det)
}

/// Solves `A x = rhs` for the unknowns still free, returning a solution whose
/// free variables are 0, or `None` if the system is inconsistent.
fn particular_solution(a: &[Vec<u64>], rhs: &[u64], l: PrimeModulus) -> Option<Vec<u64>> {
    let ncoef = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncoef, l);
    if aug[pivots.len()..].iter().any(|r| r[ncoef] != 0) {
        return None;
    }
    let mut x = vec![0; ncoef];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncoef];
    }
    Some(x)
}

/// Lexicographically least `x` in `{0, ..., l-1}^cols` with `A x = b (mod l)`,
/// or `None` when the system has no solution.
pub fn solve_mod(a: &IntMatrix, b: &[i64], l: PrimeModulus) -> Result<Option<Vec<u64>>, ZmodError> {
    if b.len() != a.rows {
        return Err(ZmodError::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let coef = a.residues(l);
    let rhs: Vec<u64> = b.iter().map(|&x| l.reduce(x)).collect();
    let n = a.cols;
    let mut fixed: Vec<u64> = Vec::with_capacity(n);
    for k in 0..n {
        // Restrict to unknowns k.. with the prefix substituted into the rhs.
        let mut rhs_k = rhs.clone();
        for (r, row) in coef.iter().enumerate() {
            for (i, &v) in fixed.iter().enumerate() {
                rhs_k[r] = l.sub(rhs_k[r], l.mul(row[i], v));
            }
        }
        let tail: Vec<Vec<u64>> = coef.iter().map(|row| row[k..].to_vec()).collect();
        let Some(x) = particular_solution(&tail, &rhs_k, l) else {
            return Ok(None);
        };
        // The feasible values of x_k form either all of Z/l or a single point.
        let zero_ok = if x[0] == 0 {
            true
        } else {
            let rest: Vec<Vec<u64>> = coef.iter().map(|row| row[k + 1..].to_vec()).collect();
            particular_solution(&rest, &rhs_k, l).is_some()
        };
        fixed.push(if zero_ok { 0 } else { x[0] });
    }
    Ok(Some(fixed))
}

/// Exact determinant over `Z` by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<i128, ZmodError> {
    if m.rows != m.cols {
        return Err(ZmodError::DimensionMismatch {
            expected: m.rows,
            found: m.cols,
        });
    }
    let n = m.rows;
    let mut a: Vec<Vec<i128>> = m
        .entries
        .chunks(n)
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(a[k][k]).ok_or(ZmodError::Overflow)?;
                let rhs = a[i][k].checked_mul(a[k][j]).ok_or(ZmodError::Overflow)?;
                a[i][j] = lhs.checked_sub(rhs).ok_or(ZmodError::Overflow)? / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Gcd over `Z` of all `cols x cols` minors of `m`; 0 when every such minor
/// vanishes.
pub fn minor_gcd(m: &IntMatrix) -> Result<u128, ZmodError> {
    if m.rows < m.cols {
        return Err(ZmodError::TooFewRows {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let cols: Vec<usize> = (0..m.cols).collect();
    let mut g = 0u128;
    for rows in Combinations::new(m.rows, m.cols) {
        let d = det(&m.submatrix(&rows, &cols))?;
        g = gcd(g, d.unsigned_abs());
        if g == 1 {
            break;
        }
    }
    Ok(g)
}
