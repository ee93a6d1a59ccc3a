//! Symbolic nicely ramified classes and splitting certificates.
//!
//! A class is modeled as
//! `alpha_0 + sum c_{u,i} (u, x_i) + sum m_{i,j} (x_i, x_j)` with coefficients
//! mod `l`, where the `x_i` are local equations of divisors and the `u` are
//! opaque unit tokens. Residues use the tame symbol
//! `d(f, g) = (-1)^{v(f) v(g)} f^{v(g)} g^{-v(f)}`.
//!
//! The certificate part solves `sum_i a_i m_{i,j} = delta_{j,j0} mod l` over a
//! row set avoiding the auxiliary divisors through a point, which is what makes
//! the class unramified after adjoining roots of the row functions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combin::Combinations;
use crate::pirutka::PirutkaCandidate;
use crate::zmodl::{solve_mod, IntMatrix, PrimeModulus, ZmodError};

/// Unit token standing for `-1`, produced by rewriting `(x, x)` as `(-1, x)`.
pub const MINUS_ONE: &str = "-1";

/// Token for the unramified part of a class.
pub const UNRAMIFIED: &str = "alpha0";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitError {
    CoordinateOutOfRange { index: usize, d: usize },
    RowOutOfRange { index: usize, n: usize },
    LengthMismatch { expected: usize, found: usize },
    ModulusMismatch { left: u64, right: u64 },
    DimensionMismatch { left: usize, right: usize },
    EmptyJ,
    /// `|I'| + |J|` exceeds `d`.
    ImproperIntersection { i_prime: usize, j: usize, d: usize },
    J0NotInJ(usize),
    /// The system over `T_{I,J}` has no solution; `rows` and `cols` are 1-based.
    NotPirutka { rows: Vec<usize>, cols: Vec<usize> },
    Overflow,
    Zmod(ZmodError),
}

impl fmt::Display for SplitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitError::CoordinateOutOfRange { index, d } => {
                write!(f, "coordinate {index} outside 1..={d}")
            }
            SplitError::RowOutOfRange { index, n } => write!(f, "row {index} outside 1..={n}"),
            SplitError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} exponents, found {found}")
            }
            SplitError::ModulusMismatch { left, right } => {
                write!(f, "classes over different primes {left} and {right}")
            }
            SplitError::DimensionMismatch { left, right } => {
                write!(f, "classes over {left} and {right} coordinates")
            }
            SplitError::EmptyJ => write!(f, "J must be nonempty"),
            SplitError::ImproperIntersection { i_prime, j, d } => {
                write!(f, "|I'| + |J| = {} exceeds d = {d}", i_prime + j)
            }
            SplitError::J0NotInJ(j0) => write!(f, "j0 = {j0} is not in J"),
            SplitError::NotPirutka { rows, cols } => {
                write!(f, "T_{{I,J}} has deficient rank for I = {rows:?}, J = {cols:?}")
            }
            SplitError::Overflow => write!(f, "integer overflow"),
            SplitError::Zmod(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for SplitError {}

impl From<ZmodError> for SplitError {
    fn from(e: ZmodError) -> Self {
        SplitError::Zmod(e)
    }
}

/// `prod u^{units[u]} * prod x_i^{exponents[i-1]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Monomial {
    pub units: BTreeMap<String, i64>,
    pub exponents: Vec<i64>,
}

impl Monomial {
    /// The coordinate `x_i` (1-based) among `d` coordinates.
    pub fn coordinate(i: usize, d: usize) -> Result<Self, SplitError> {
        if i == 0 || i > d {
            return Err(SplitError::CoordinateOutOfRange { index: i, d });
        }
        let mut exponents = vec![0; d];
        exponents[i - 1] = 1;
        Ok(Monomial {
            units: BTreeMap::new(),
            exponents,
        })
    }

    pub fn unit(token: &str, d: usize) -> Self {
        Monomial {
            units: core::iter::once((token.to_string(), 1)).collect(),
            exponents: vec![0; d],
        }
    }

    pub fn times(mut self, other: &Monomial) -> Self {
        for (u, e) in &other.units {
            *self.units.entry(u.clone()).or_insert(0) += e;
        }
        for (a, b) in self.exponents.iter_mut().zip(&other.exponents) {
            *a += b;
        }
        self
    }
}

/// `coefficient * (f, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSymbol {
    pub coefficient: i64,
    pub f: Monomial,
    pub g: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolClass {
    l: PrimeModulus,
    d: usize,
    unit_terms: BTreeMap<(String, usize), u64>,
    pair_terms: BTreeMap<(usize, usize), u64>,
    unramified_part: String,
}

impl SymbolClass {
    pub fn zero(l: PrimeModulus, d: usize) -> Self {
        SymbolClass {
            l,
            d,
            unit_terms: BTreeMap::new(),
            pair_terms: BTreeMap::new(),
            unramified_part: UNRAMIFIED.to_string(),
        }
    }

    /// Builds a class from `(u, i, c)` and `(i, j, m)` terms with 1-based
    /// coordinates. Pairs with `i > j` are flipped with a sign change and
    /// `(x_i, x_i)` becomes `(-1, x_i)`.
    pub fn from_terms<U, P>(l: PrimeModulus, d: usize, units: U, pairs: P) -> Result<Self, SplitError>
    where
        U: IntoIterator<Item = (String, usize, i64)>,
        P: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut acc = Accumulator::new(d);
        for (u, i, c) in units {
            acc.unit(u, i, c as i128)?;
        }
        for (i, j, m) in pairs {
            acc.pair(i, j, m as i128)?;
        }
        Ok(acc.finish(l))
    }

    pub fn l(&self) -> PrimeModulus {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn unit_terms(&self) -> &BTreeMap<(String, usize), u64> {
        &self.unit_terms
    }

    pub fn pair_terms(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.pair_terms
    }

    pub fn unramified_part(&self) -> &str {
        &self.unramified_part
    }

    /// True iff the ramified part vanishes.
    pub fn is_zero(&self) -> bool {
        self.unit_terms.is_empty() && self.pair_terms.is_empty()
    }

    pub fn add(&self, other: &SymbolClass) -> Result<SymbolClass, SplitError> {
        if self.l != other.l {
            return Err(SplitError::ModulusMismatch {
                left: self.l.get(),
                right: other.l.get(),
            });
        }
        if self.d != other.d {
            return Err(SplitError::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        let l = self.l.get();
        let mut out = self.clone();
        for (k, c) in &other.unit_terms {
            *out.unit_terms.entry(k.clone()).or_insert(0) += c;
        }
        for (k, c) in &other.pair_terms {
            *out.pair_terms.entry(*k).or_insert(0) += c;
        }
        out.unit_terms.retain(|_, c| {
            *c %= l;
            *c != 0
        });
        out.pair_terms.retain(|_, c| {
            *c %= l;
            *c != 0
        });
        Ok(out)
    }

    /// The class written back as raw symbols, one per term.
    pub fn to_raw(&self) -> Vec<RawSymbol> {
        let d = self.d;
        let coord = |i: usize| Monomial::coordinate(i, d).expect("stored coordinates are in range");
        let units = self.unit_terms.iter().map(|((u, i), c)| RawSymbol {
            coefficient: *c as i64,
            f: Monomial::unit(u, d),
            g: coord(*i),
        });
        let pairs = self.pair_terms.iter().map(|((i, j), m)| RawSymbol {
            coefficient: *m as i64,
            f: coord(*i),
            g: coord(*j),
        });
        units.chain(pairs).collect()
    }
}

struct Accumulator {
    d: usize,
    units: BTreeMap<(String, usize), i128>,
    pairs: BTreeMap<(usize, usize), i128>,
}

impl Accumulator {
    fn new(d: usize) -> Self {
        Accumulator {
            d,
            units: BTreeMap::new(),
            pairs: BTreeMap::new(),
        }
    }

    fn check(&self, i: usize) -> Result<(), SplitError> {
        if i == 0 || i > self.d {
            Err(SplitError::CoordinateOutOfRange { index: i, d: self.d })
        } else {
            Ok(())
        }
    }

    fn unit(&mut self, u: String, i: usize, c: i128) -> Result<(), SplitError> {
        self.check(i)?;
        let slot = self.units.entry((u, i)).or_insert(0);
        *slot = slot.checked_add(c).ok_or(SplitError::Overflow)?;
        Ok(())
    }

    fn pair(&mut self, i: usize, j: usize, c: i128) -> Result<(), SplitError> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return self.unit(MINUS_ONE.to_string(), i, c);
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let slot = self.pairs.entry(key).or_insert(0);
        *slot = slot.checked_add(c).ok_or(SplitError::Overflow)?;
        Ok(())
    }

    fn finish(self, l: PrimeModulus) -> SymbolClass {
        let unit_terms = self
            .units
            .into_iter()
            .map(|(k, c)| (k, l.reduce_i128(c)))
            .filter(|(_, c)| *c != 0)
            .collect();
        let pair_terms = self
            .pairs
            .into_iter()
            .map(|(k, c)| (k, l.reduce_i128(c)))
            .filter(|(_, c)| *c != 0)
            .collect();
        SymbolClass {
            unit_terms,
            pair_terms,
            ..SymbolClass::zero(l, self.d)
        }
    }
}

fn product(a: i64, b: i64, c: i64) -> Result<i128, SplitError> {
    (a as i128)
        .checked_mul(b as i128)
        .and_then(|x| x.checked_mul(c as i128))
        .ok_or(SplitError::Overflow)
}

/// Expands raw symbols bimultiplicatively. Unit-unit symbols are unramified
/// and fold into `alpha0`.
pub fn normal_form(raw: &[RawSymbol], d: usize, l: PrimeModulus) -> Result<SymbolClass, SplitError> {
    let mut acc = Accumulator::new(d);
    for s in raw {
        for m in [&s.f, &s.g] {
            if m.exponents.len() != d {
                return Err(SplitError::LengthMismatch {
                    expected: d,
                    found: m.exponents.len(),
                });
            }
        }
        let c = s.coefficient;
        for (u, a) in &s.f.units {
            for (j, e) in s.g.exponents.iter().enumerate() {
                if *e != 0 {
                    acc.unit(u.clone(), j + 1, product(c, *a, *e)?)?;
                }
            }
        }
        for (w, b) in &s.g.units {
            for (i, e) in s.f.exponents.iter().enumerate() {
                if *e != 0 {
                    acc.unit(w.clone(), i + 1, -product(c, *e, *b)?)?;
                }
            }
        }
        for (i, e) in s.f.exponents.iter().enumerate() {
            for (j, e2) in s.g.exponents.iter().enumerate() {
                if *e != 0 && *e2 != 0 {
                    acc.pair(i + 1, j + 1, product(c, *e, *e2)?)?;
                }
            }
        }
    }
    Ok(acc.finish(l))
}

/// A residue class in `k(D_k)^* / l`: unit tokens with exponents and an
/// exponent vector over all `d` coordinates, the entry for `k` always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    pub coordinate: usize,
    pub units: BTreeMap<String, u64>,
    pub exponents: Vec<u64>,
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.units.is_empty() && self.exponents.iter().all(|&e| e == 0)
    }
}

/// Residue of `alpha` along `x_k = 0` (1-based `k`).
pub fn residue_along(alpha: &SymbolClass, k: usize) -> Result<Residue, SplitError> {
    if k == 0 || k > alpha.d {
        return Err(SplitError::CoordinateOutOfRange { index: k, d: alpha.d });
    }
    let l = alpha.l.get();
    let mut units: BTreeMap<String, u64> = BTreeMap::new();
    let mut exponents = vec![0u64; alpha.d];
    for ((u, i), c) in &alpha.unit_terms {
        if *i == k {
            *units.entry(u.clone()).or_insert(0) += c;
        }
    }
    for ((i, j), m) in &alpha.pair_terms {
        if *i == k {
            // d(x_k, x_j) = x_j^{-1}
            exponents[j - 1] += l - m;
        } else if *j == k {
            // d(x_i, x_k) = x_i
            exponents[i - 1] += m;
        }
    }
    units.retain(|_, c| {
        *c %= l;
        *c != 0
    });
    for e in &mut exponents {
        *e %= l;
    }
    Ok(Residue {
        coordinate: k,
        units,
        exponents,
    })
}

/// Pulls `alpha` back along `x_i = z_i^l` for `i` in `s` (1-based). Every
/// term touching such a coordinate picks up a factor `l` and vanishes.
pub fn kummer_pullback(alpha: &SymbolClass, s: &BTreeSet<usize>) -> Result<SymbolClass, SplitError> {
    if let Some(&i) = s.iter().find(|&&i| i == 0 || i > alpha.d) {
        return Err(SplitError::CoordinateOutOfRange { index: i, d: alpha.d });
    }
    let mut out = alpha.clone();
    out.unit_terms.retain(|(_, i), _| !s.contains(i));
    out.pair_terms.retain(|(i, j), _| !s.contains(i) && !s.contains(j));
    Ok(out)
}

/// A point lying on `D_j` for `j` in `J` and on `E_i` for `i` in `I'`, all
/// 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StratumPoint {
    j: BTreeSet<usize>,
    i_prime: BTreeSet<usize>,
}

impl StratumPoint {
    pub fn new(j: BTreeSet<usize>, i_prime: BTreeSet<usize>, n: usize, d: usize) -> Result<Self, SplitError> {
        if j.is_empty() {
            return Err(SplitError::EmptyJ);
        }
        if let Some(&x) = j.iter().find(|&&x| x == 0 || x > d) {
            return Err(SplitError::CoordinateOutOfRange { index: x, d });
        }
        if let Some(&x) = i_prime.iter().find(|&&x| x == 0 || x > n) {
            return Err(SplitError::RowOutOfRange { index: x, n });
        }
        if i_prime.len() + j.len() > d {
            return Err(SplitError::ImproperIntersection {
                i_prime: i_prime.len(),
                j: j.len(),
                d,
            });
        }
        Ok(StratumPoint { j, i_prime })
    }

    pub fn j(&self) -> &BTreeSet<usize> {
        &self.j
    }

    pub fn i_prime(&self) -> &BTreeSet<usize> {
        &self.i_prime
    }
}

/// `rows` is the 1-based set `I` in increasing order and `a[k]` the
/// coefficient of row `rows[k]`. `b` holds `sum_i a_i m_{i,j}` for every
/// `j != j0`, including those in `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingCertificate {
    pub j0: usize,
    pub rows: Vec<usize>,
    pub a: Vec<u64>,
    pub r: i64,
    pub b: BTreeMap<usize, i64>,
}

fn column_sum(m: &IntMatrix, rows: &[usize], a: &[u64], col: usize) -> Option<i64> {
    let mut acc: i128 = 0;
    for (&i, &ai) in rows.iter().zip(a) {
        acc = acc.checked_add((ai as i128).checked_mul(m.get(i - 1, col - 1) as i128)?)?;
    }
    i64::try_from(acc).ok()
}

pub fn find_certificate(
    t: &PirutkaCandidate,
    l: PrimeModulus,
    z: &StratumPoint,
    j0: usize,
) -> Result<SplittingCertificate, SplitError> {
    let (n, d) = (t.n(), t.d());
    let z = StratumPoint::new(z.j.clone(), z.i_prime.clone(), n, d)?;
    if !z.j.contains(&j0) {
        return Err(SplitError::J0NotInJ(j0));
    }
    let size = n - d + z.j.len();
    let rows: Vec<usize> = (1..=n).filter(|i| !z.i_prime.contains(i)).take(size).collect();
    let cols: Vec<usize> = z.j.iter().copied().collect();
    let r0: Vec<usize> = rows.iter().map(|i| i - 1).collect();
    let c0: Vec<usize> = cols.iter().map(|j| j - 1).collect();
    let system = t.matrix().submatrix(&r0, &c0).transpose();
    let rhs: Vec<i64> = cols.iter().map(|&j| i64::from(j == j0)).collect();
    let a = solve_mod(&system, &rhs, l)?.ok_or_else(|| SplitError::NotPirutka {
        rows: rows.clone(),
        cols: cols.clone(),
    })?;
    let m = t.matrix();
    let r = column_sum(m, &rows, &a, j0).ok_or(SplitError::Overflow)?;
    let mut b = BTreeMap::new();
    for j in (1..=d).filter(|&j| j != j0) {
        b.insert(j, column_sum(m, &rows, &a, j).ok_or(SplitError::Overflow)?);
    }
    Ok(SplittingCertificate { j0, rows, a, r, b })
}

/// Why a certificate was rejected, in the order the checks run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateFailure {
    Stratum(SplitError),
    J0NotInJ,
    /// `I` meets `I'`.
    Support,
    /// `|I|` is not `n - d + |J|`.
    Size,
    /// Rows unsorted or out of range, `a` misaligned or unreduced, or `b`
    /// keyed wrong.
    Shape,
    RNotOne,
    RMismatch,
    Congruence { j: usize },
    BMismatch { j: usize },
}

impl fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateFailure::Stratum(e) => write!(f, "stratum: {e}"),
            CertificateFailure::J0NotInJ => write!(f, "j0 not in J"),
            CertificateFailure::Support => write!(f, "support"),
            CertificateFailure::Size => write!(f, "size"),
            CertificateFailure::Shape => write!(f, "shape"),
            CertificateFailure::RNotOne => write!(f, "r ≢ 1 mod ℓ"),
            CertificateFailure::RMismatch => write!(f, "r mismatch"),
            CertificateFailure::Congruence { j } => write!(f, "congruence at j = {j}"),
            CertificateFailure::BMismatch { j } => write!(f, "b mismatch at j = {j}"),
        }
    }
}

pub fn verify_certificate(
    c: &SplittingCertificate,
    t: &PirutkaCandidate,
    l: PrimeModulus,
    z: &StratumPoint,
) -> Result<(), CertificateFailure> {
    let (n, d) = (t.n(), t.d());
    let z = StratumPoint::new(z.j.clone(), z.i_prime.clone(), n, d).map_err(CertificateFailure::Stratum)?;
    if !z.j.contains(&c.j0) {
        return Err(CertificateFailure::J0NotInJ);
    }
    if c.rows.iter().any(|i| z.i_prime.contains(i)) {
        return Err(CertificateFailure::Support);
    }
    if c.rows.len() != n - d + z.j.len() {
        return Err(CertificateFailure::Size);
    }
    let sorted = c.rows.windows(2).all(|w| w[0] < w[1]);
    let in_range = c.rows.iter().all(|&i| (1..=n).contains(&i));
    let keys: BTreeSet<usize> = (1..=d).filter(|&j| j != c.j0).collect();
    if !sorted
        || !in_range
        || c.a.len() != c.rows.len()
        || c.a.iter().any(|&x| x >= l.get())
        || c.b.keys().copied().collect::<BTreeSet<_>>() != keys
    {
        return Err(CertificateFailure::Shape);
    }
    if l.reduce(c.r) != 1 {
        return Err(CertificateFailure::RNotOne);
    }
    let m = t.matrix();
    if column_sum(m, &c.rows, &c.a, c.j0) != Some(c.r) {
        return Err(CertificateFailure::RMismatch);
    }
    for &j in z.j.iter().filter(|&&j| j != c.j0) {
        match column_sum(m, &c.rows, &c.a, j) {
            Some(s) if l.reduce(s) == 0 => {}
            _ => return Err(CertificateFailure::Congruence { j }),
        }
    }
    for (&j, &bj) in &c.b {
        if column_sum(m, &c.rows, &c.a, j) != Some(bj) {
            return Err(CertificateFailure::BMismatch { j });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitAttempt {
    pub point: StratumPoint,
    pub j0: usize,
    pub outcome: Result<SplittingCertificate, SplitError>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalReport {
    pub attempts: Vec<SplitAttempt>,
}

impl UniversalReport {
    pub fn verdict(&self) -> bool {
        self.attempts.iter().all(|a| a.outcome.is_ok())
    }

    pub fn first_failure(&self) -> Option<&SplitAttempt> {
        self.attempts.iter().find(|a| a.outcome.is_err())
    }
}

/// Every point of the worst case `|I'| = d - |J|`, ordered by `(|J|, J)`,
/// then `j0`, then `I'`.
pub fn split_points(n: usize, d: usize) -> Vec<(StratumPoint, usize)> {
    let mut out = Vec::new();
    for size in 1..=d {
        for j in Combinations::new(d, size) {
            let j: BTreeSet<usize> = j.into_iter().map(|x| x + 1).collect();
            for &j0 in &j {
                for ip in Combinations::new(n, d - size) {
                    let i_prime = ip.into_iter().map(|x| x + 1).collect();
                    out.push((StratumPoint { j: j.clone(), i_prime }, j0));
                }
            }
        }
    }
    out
}

pub fn universal_split_check(t: &PirutkaCandidate, l: PrimeModulus) -> UniversalReport {
    let attempts = split_points(t.n(), t.d())
        .into_iter()
        .map(|(point, j0)| {
            let outcome = find_certificate(t, l, &point, j0);
            SplitAttempt { point, j0, outcome }
        })
        .collect();
    UniversalReport { attempts }
}
