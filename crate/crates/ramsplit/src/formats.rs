//! JSON encodings of the core types.
//!
//! Vertex labels are strings for original vertices and sorted nested arrays
//! for barycenters, so `e[a,b]` is written `["a","b"]`. Index sets are
//! 1-based everywhere.

use std::collections::{BTreeMap, BTreeSet};

use ramsplit_core::dualcomplex::{DualComplex, Exceptional, Presentation};
use ramsplit_core::pirutka::{BadPrimeSet, CheckReport, PirutkaCandidate, SearchOutcome};
use ramsplit_core::simplicial::{Simplex, SimplicialComplex, VertexLabel};
use ramsplit_core::splitting::{
    Monomial, RawSymbol, Residue, SplittingCertificate, StratumPoint, SymbolClass,
};
use ramsplit_core::zmodl::PrimeModulus;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::Error;

pub fn label_to_json(v: &VertexLabel) -> Value {
    match v {
        VertexLabel::Original(name) => Value::String(name.clone()),
        VertexLabel::Barycenter(s) => simplex_to_json(s),
    }
}

pub fn simplex_to_json(s: &Simplex) -> Value {
    Value::Array(s.iter().map(label_to_json).collect())
}

pub fn label_from_json(v: &Value) -> Result<VertexLabel, Error> {
    match v {
        Value::String(s) => Ok(VertexLabel::Original(s.clone())),
        Value::Array(_) => Ok(VertexLabel::Barycenter(simplex_from_json(v)?)),
        other => Err(Error::invalid(format!("vertex label must be a string or array, got {other}"))),
    }
}

pub fn simplex_from_json(v: &Value) -> Result<Simplex, Error> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::invalid(format!("simplex must be an array, got {v}")))?;
    let set: Simplex = items.iter().map(label_from_json).collect::<Result<_, _>>()?;
    if set.len() != items.len() {
        return Err(Error::invalid(format!("simplex {v} repeats a vertex")));
    }
    if set.is_empty() {
        return Err(Error::invalid("empty simplex"));
    }
    Ok(set)
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T, Error> {
    T::deserialize(v).map_err(|e| Error::invalid(format!("{what}: {e}")))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    n: usize,
    d: usize,
    entries: Vec<Vec<i64>>,
}

pub fn matrix_to_json(c: &PirutkaCandidate) -> Value {
    json!({ "n": c.n(), "d": c.d(), "entries": c.matrix().to_rows() })
}

pub fn matrix_from_json(v: &Value) -> Result<PirutkaCandidate, Error> {
    let m: MatrixJson = parse(v, "matrix")?;
    if m.entries.len() != m.n || m.entries.iter().any(|r| r.len() != m.d) {
        return Err(Error::invalid(format!("entries do not form a {} x {} matrix", m.n, m.d)));
    }
    PirutkaCandidate::from_rows(&m.entries).map_err(Error::from)
}

pub fn check_to_json(r: &CheckReport) -> Value {
    let mut out = json!({ "verdict": r.verdict });
    if let Some(w) = &r.witness {
        out["witness"] = json!({ "rows": w.rows, "cols": w.cols, "rank": w.rank });
    }
    out
}

pub fn search_to_json(s: &SearchOutcome) -> Value {
    json!({
        "found": s.found.as_ref().map(matrix_to_json),
        "examined": s.examined as u64,
        "checked": s.checked as u64,
        "pruned": s.pruned() as u64,
    })
}

pub fn bad_primes_to_json(b: &BadPrimeSet) -> Value {
    match b {
        BadPrimeSet::Finite(ps) => json!({ "bad_primes": ps }),
        BadPrimeSet::AllPrimes => json!({ "bad_primes": "all" }),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    facets: Vec<Value>,
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    json!({ "facets": k.facets().iter().map(simplex_to_json).collect::<Vec<_>>() })
}

fn facets_from_json(facets: &[Value]) -> Result<SimplicialComplex, Error> {
    let simplices = facets.iter().map(simplex_from_json).collect::<Result<Vec<_>, _>>()?;
    SimplicialComplex::from_facets(simplices).map_err(Error::from)
}

pub fn complex_from_json(v: &Value) -> Result<SimplicialComplex, Error> {
    let c: ComplexJson = parse(v, "complex")?;
    facets_from_json(&c.facets)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExceptionalJson {
    vertex: Value,
    source: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DualJson {
    facets: Vec<Value>,
    divisors: Vec<String>,
    ambient_dim: usize,
    #[serde(default)]
    exceptional: Vec<ExceptionalJson>,
}

pub fn dual_to_json(d: &DualComplex) -> Value {
    let exceptional: Vec<Value> = d
        .exceptional_log()
        .iter()
        .map(|e| json!({ "vertex": label_to_json(&e.vertex), "source": simplex_to_json(&e.source) }))
        .collect();
    json!({
        "facets": d.complex().facets().iter().map(simplex_to_json).collect::<Vec<_>>(),
        "divisors": d.divisors(),
        "ambient_dim": d.ambient_dim(),
        "exceptional": exceptional,
    })
}

pub fn dual_from_json(v: &Value) -> Result<DualComplex, Error> {
    let d: DualJson = parse(v, "dual complex")?;
    let complex = facets_from_json(&d.facets)?;
    let exceptional = d
        .exceptional
        .iter()
        .map(|e| {
            Ok(Exceptional {
                vertex: label_from_json(&e.vertex)?,
                source: simplex_from_json(&e.source)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    DualComplex::new(complex, d.divisors, d.ambient_dim, exceptional).map_err(Error::from)
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    let groups: Vec<Vec<Value>> = p
        .groups
        .iter()
        .map(|g| g.iter().map(label_to_json).collect())
        .collect();
    json!({ "groups": groups })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitTermJson {
    u: String,
    i: usize,
    c: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairTermJson {
    i: usize,
    j: usize,
    m: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolClassJson {
    l: u64,
    d: usize,
    #[serde(default)]
    units: Vec<UnitTermJson>,
    #[serde(default)]
    pairs: Vec<PairTermJson>,
}

pub fn class_to_json(a: &SymbolClass) -> Value {
    let units: Vec<Value> = a
        .unit_terms()
        .iter()
        .map(|((u, i), c)| json!({ "u": u, "i": i, "c": c }))
        .collect();
    let pairs: Vec<Value> = a
        .pair_terms()
        .iter()
        .map(|((i, j), m)| json!({ "i": i, "j": j, "m": m }))
        .collect();
    json!({ "l": a.l().get(), "d": a.d(), "units": units, "pairs": pairs })
}

pub fn class_from_json(v: &Value) -> Result<SymbolClass, Error> {
    let s: SymbolClassJson = parse(v, "symbol class")?;
    let l = PrimeModulus::new(s.l).map_err(Error::from)?;
    SymbolClass::from_terms(
        l,
        s.d,
        s.units.into_iter().map(|t| (t.u, t.i, t.c)),
        s.pairs.into_iter().map(|t| (t.i, t.j, t.m)),
    )
    .map_err(Error::from)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialJson {
    #[serde(default)]
    units: BTreeMap<String, i64>,
    #[serde(default)]
    x: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymbolJson {
    #[serde(default = "one")]
    c: i64,
    f: MonomialJson,
    g: MonomialJson,
}

fn one() -> i64 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassJson {
    l: u64,
    d: usize,
    symbols: Vec<RawSymbolJson>,
}

/// `{"l", "d", "symbols": [{"c", "f": {"units": {"u": 1}, "x": [..]}, "g": ..}]}`;
/// an omitted `x` means the zero exponent vector.
pub fn raw_symbols_from_json(v: &Value) -> Result<(PrimeModulus, usize, Vec<RawSymbol>), Error> {
    let r: RawClassJson = parse(v, "raw symbols")?;
    let l = PrimeModulus::new(r.l).map_err(Error::from)?;
    let d = r.d;
    let mono = |m: MonomialJson| Monomial {
        units: m.units,
        exponents: if m.x.is_empty() { vec![0; d] } else { m.x },
    };
    let symbols = r
        .symbols
        .into_iter()
        .map(|s| RawSymbol {
            coefficient: s.c,
            f: mono(s.f),
            g: mono(s.g),
        })
        .collect();
    Ok((l, d, symbols))
}

pub fn residue_to_json(r: &Residue) -> Value {
    json!({ "coordinate": r.coordinate, "units": r.units, "exponents": r.exponents })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StratumJson {
    #[serde(rename = "J")]
    j: BTreeSet<usize>,
    #[serde(rename = "I_prime", default)]
    i_prime: BTreeSet<usize>,
}

pub fn stratum_to_json(z: &StratumPoint) -> Value {
    json!({ "J": z.j(), "I_prime": z.i_prime() })
}

pub fn stratum_from_json(v: &Value, n: usize, d: usize) -> Result<StratumPoint, Error> {
    let s: StratumJson = parse(v, "stratum point")?;
    StratumPoint::new(s.j, s.i_prime, n, d).map_err(Error::from)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    j0: usize,
    #[serde(rename = "I")]
    rows: Vec<usize>,
    a: Vec<u64>,
    r: i64,
    b: BTreeMap<usize, i64>,
}

pub fn certificate_to_json(c: &SplittingCertificate) -> Value {
    serde_json::to_value(CertificateJson {
        j0: c.j0,
        rows: c.rows.clone(),
        a: c.a.clone(),
        r: c.r,
        b: c.b.clone(),
    })
    .expect("certificate serializes")
}

pub fn certificate_from_json(v: &Value) -> Result<SplittingCertificate, Error> {
    let c: CertificateJson = parse(v, "certificate")?;
    Ok(SplittingCertificate {
        j0: c.j0,
        rows: c.rows,
        a: c.a,
        r: c.r,
        b: c.b,
    })
}
