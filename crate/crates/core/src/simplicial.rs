//! Finite abstract simplicial complexes.
//!
//! A complex is stored by its facets (maximal simplices); the full simplex
//! family is materialized on demand with [`SimplicialComplex::simplices`].
//! Vertex labels are structural: subdividing at `sigma` introduces the vertex
//! `Barycenter(sigma)`, and the order complex labels the vertex standing for a
//! simplex `tau` by `Barycenter(tau)` as well. With that convention the natural
//! map `Sd(K) -> Fl(K)` is the identity on barycenters and sends a surviving
//! vertex `v` to `Barycenter({v})`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Largest vertex count accepted by the subdividing operations.
pub const MAX_VERTICES: usize = 32;
/// Largest dimension accepted by the subdividing operations.
pub const MAX_DIMENSION: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    Original(String),
    Barycenter(Simplex),
}

impl VertexLabel {
    pub fn original(name: impl Into<String>) -> Self {
        VertexLabel::Original(name.into())
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Original(name) => f.write_str(name),
            VertexLabel::Barycenter(s) => {
                f.write_str("e[")?;
                for (k, v) in s.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    v.fmt(f)?;
                }
                f.write_str("]")
            }
        }
    }
}

pub type Simplex = BTreeSet<VertexLabel>;

/// Simplex on original vertices with the given names.
pub fn simplex<S: AsRef<str>>(names: &[S]) -> Simplex {
    names
        .iter()
        .map(|n| VertexLabel::original(n.as_ref()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexError {
    EmptySimplex,
    /// The simplex is not a member of the complex.
    NotASimplex(Simplex),
    /// Input exceeds the desk-scale limits.
    TooLarge { vertices: usize, dimension: usize },
    /// The new barycenter label already names a vertex.
    LabelCollision(VertexLabel),
    /// A vertex that does not stand for a simplex of an underlying complex.
    NotAChainVertex(VertexLabel),
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::EmptySimplex => write!(f, "simplices must be nonempty"),
            ComplexError::NotASimplex(s) => {
                write!(f, "not a simplex of the complex: {{")?;
                for (k, v) in s.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
            ComplexError::TooLarge {
                vertices,
                dimension,
            } => write!(
                f,
                "complex with {vertices} vertices and dimension {dimension} exceeds the limits \
                 ({MAX_VERTICES} vertices, dimension {MAX_DIMENSION})"
            ),
            ComplexError::LabelCollision(v) => write!(f, "vertex label {v} already in use"),
            ComplexError::NotAChainVertex(v) => {
                write!(f, "vertex {v} is not labeled by a simplex")
            }
        }
    }
}

impl core::error::Error for ComplexError {}

/// A finite abstract simplicial complex, closed under nonempty subsets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    facets: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    /// The complex generated by the given simplices (the closure of the family
    /// under nonempty subsets).
    pub fn from_facets<I: IntoIterator<Item = Simplex>>(simplices: I) -> Result<Self, ComplexError> {
        let mut candidates: Vec<Simplex> = simplices.into_iter().collect();
        if candidates.iter().any(|s| s.is_empty()) {
            return Err(ComplexError::EmptySimplex);
        }
        // larger first so every kept simplex is checked against all bigger ones
        candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        candidates.dedup();
        let mut facets: Vec<Simplex> = Vec::new();
        for s in candidates {
            if !facets.iter().any(|f| s.is_subset(f)) {
                facets.push(s);
            }
        }
        Ok(SimplicialComplex {
            facets: facets.into_iter().collect(),
        })
    }

    /// The caller guarantees `facets` is an antichain of nonempty sets.
    fn from_antichain(facets: BTreeSet<Simplex>) -> Self {
        debug_assert!(facets.iter().all(|s| !s.is_empty()));
        SimplicialComplex { facets }
    }

    pub fn facets(&self) -> &BTreeSet<Simplex> {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        !s.is_empty() && self.facets.iter().any(|f| s.is_subset(f))
    }

    pub fn vertices(&self) -> BTreeSet<VertexLabel> {
        self.facets.iter().flatten().cloned().collect()
    }

    /// The full simplex family.
    pub fn simplices(&self) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            let items: Vec<&VertexLabel> = f.iter().collect();
            for mask in 1u64..(1u64 << items.len()) {
                out.insert(
                    items
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask >> k & 1 == 1)
                        .map(|(_, v)| (*v).clone())
                        .collect(),
                );
            }
        }
        out
    }

    /// The `i`-simplices (cardinality `i + 1`), sorted.
    pub fn simplices_of_dim(&self, i: usize) -> Vec<Simplex> {
        self.simplices()
            .into_iter()
            .filter(|s| s.len() == i + 1)
            .collect()
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    pub fn check_limits(&self) -> Result<(), ComplexError> {
        let vertices = self.vertices().len();
        let dimension = self.dimension().unwrap_or(0);
        if vertices > MAX_VERTICES || dimension > MAX_DIMENSION {
            return Err(ComplexError::TooLarge {
                vertices,
                dimension,
            });
        }
        Ok(())
    }
}

/// Star subdivision at `sigma`: simplices not containing `sigma` are kept and
/// every `tau >= sigma` is replaced by the cones `(tau \ J) + {e_sigma}` for
/// nonempty `J` inside `sigma`. An empty `sigma` returns the complex unchanged.
pub fn star_subdivision(
    complex: &SimplicialComplex,
    sigma: &Simplex,
) -> Result<SimplicialComplex, ComplexError> {
    if sigma.is_empty() {
        return Ok(complex.clone());
    }
    if !complex.contains(sigma) {
        return Err(ComplexError::NotASimplex(sigma.clone()));
    }
    let apex = VertexLabel::Barycenter(sigma.clone());
    if complex.facets.iter().any(|f| f.contains(&apex)) {
        return Err(ComplexError::LabelCollision(apex));
    }
    // On facets the formula only needs singleton J; the result is again an
    // antichain.
    let mut facets = BTreeSet::new();
    for f in &complex.facets {
        if !sigma.is_subset(f) {
            facets.insert(f.clone());
            continue;
        }
        for j in sigma {
            let mut cone = f.clone();
            cone.remove(j);
            cone.insert(apex.clone());
            facets.insert(cone);
        }
    }
    Ok(SimplicialComplex::from_antichain(facets))
}

/// Barycentric subdivision: star subdivide at every top-dimensional simplex,
/// then every simplex one dimension lower, down to the edges.
pub fn barycentric(complex: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
    complex.check_limits()?;
    let Some(top) = complex.dimension() else {
        return Ok(SimplicialComplex::default());
    };
    let all = complex.simplices();
    let mut current = complex.clone();
    for i in (1..=top).rev() {
        for sigma in all.iter().filter(|s| s.len() == i + 1) {
            current = star_subdivision(&current, sigma)?;
        }
    }
    Ok(current)
}

/// The order complex: one vertex `Barycenter(tau)` per simplex `tau`, and a
/// simplex for every chain of strict inclusions.
pub fn order_complex(complex: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
    complex.check_limits()?;
    // Maximal chains are exactly the complete flags inside the facets.
    let mut facets = BTreeSet::new();
    for f in &complex.facets {
        let items: Vec<VertexLabel> = f.iter().cloned().collect();
        for perm in permutations(items.len()) {
            let mut prefix = Simplex::new();
            let mut chain = Simplex::new();
            for &k in &perm {
                prefix.insert(items[k].clone());
                chain.insert(VertexLabel::Barycenter(prefix.clone()));
            }
            facets.insert(chain);
        }
    }
    Ok(SimplicialComplex::from_antichain(facets))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(n);
    let mut used = alloc::vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                current.push(k);
                rec(n, current, used, out);
                current.pop();
                used[k] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// Outcome of comparing `Sd(K)` with `Fl(K)` through the natural vertex map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub is_iso: bool,
    /// Vertex map from the barycentric subdivision to the order complex.
    pub bijection: BTreeMap<VertexLabel, VertexLabel>,
    /// A facet on either side with no counterpart on the other.
    pub counterexample: Option<Simplex>,
}

/// The natural map on vertices of `Sd(K)`: a surviving vertex `v` of `K` goes
/// to the chain vertex `{v}`, a barycenter `e_sigma` to `sigma`.
pub fn natural_map(complex: &SimplicialComplex, v: &VertexLabel) -> VertexLabel {
    if complex.facets.iter().any(|f| f.contains(v)) {
        VertexLabel::Barycenter(core::iter::once(v.clone()).collect())
    } else {
        v.clone()
    }
}

/// Builds `Sd(K)` and `Fl(K)` and checks that [`natural_map`] is a simplicial
/// isomorphism between them.
pub fn check_natural_iso(complex: &SimplicialComplex) -> Result<IsoReport, ComplexError> {
    let sd = barycentric(complex)?;
    let fl = order_complex(complex)?;
    let bijection: BTreeMap<VertexLabel, VertexLabel> = sd
        .vertices()
        .into_iter()
        .map(|v| {
            let image = natural_map(complex, &v);
            (v, image)
        })
        .collect();
    let image: BTreeSet<VertexLabel> = bijection.values().cloned().collect();
    let bijective = image.len() == bijection.len() && image == fl.vertices();
    let map_facet = |f: &Simplex| -> Simplex { f.iter().map(|v| bijection[v].clone()).collect() };
    let mapped: BTreeSet<Simplex> = sd.facets.iter().map(map_facet).collect();
    let counterexample = sd
        .facets
        .iter()
        .find(|f| !fl.facets.contains(&map_facet(f)))
        .cloned()
        .or_else(|| fl.facets.iter().find(|f| !mapped.contains(*f)).cloned());
    Ok(IsoReport {
        is_iso: bijective && counterexample.is_none(),
        bijection,
        counterexample,
    })
}

/// Coloring of an order complex by the dimension of the simplex each vertex
/// stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: BTreeMap<VertexLabel, usize>,
    /// No simplex contains two vertices of the same color.
    pub valid: bool,
}

impl Coloring {
    pub fn num_colors(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }
}

pub fn color_by_dimension(order: &SimplicialComplex) -> Result<Coloring, ComplexError> {
    let mut colors = BTreeMap::new();
    for v in order.vertices() {
        match &v {
            VertexLabel::Barycenter(s) => {
                let c = s.len() - 1;
                colors.insert(v, c);
            }
            VertexLabel::Original(_) => return Err(ComplexError::NotAChainVertex(v)),
        }
    }
    let valid = order.facets.iter().all(|f| {
        let seen: BTreeSet<usize> = f.iter().map(|v| colors[v]).collect();
        seen.len() == f.len()
    });
    Ok(Coloring { colors, valid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cx(facets: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| simplex(f))).unwrap()
    }

    fn bary(names: &[&str]) -> VertexLabel {
        VertexLabel::Barycenter(simplex(names))
    }

    #[test]
    fn construction_reduces_to_facets() {
        let k = cx(&[&["a", "b"], &["a"], &["b", "c"], &["a", "b"]]);
        assert_eq!(k.facets().len(), 2);
        assert_eq!(k.simplices().len(), 5);
        assert_eq!(k.dimension(), Some(1));
        assert_eq!(
            SimplicialComplex::from_facets([Simplex::new()]),
            Err(ComplexError::EmptySimplex)
        );
    }

    #[test]
    fn star_of_triangle() {
        let k = cx(&[&["a", "b", "c"]]);
        let s = star_subdivision(&k, &simplex(&["a", "b", "c"])).unwrap();
        let e = bary(&["a", "b", "c"]);
        let expected: BTreeSet<Simplex> = [["a", "b"], ["b", "c"], ["a", "c"]]
            .iter()
            .map(|p| {
                let mut f = simplex(p);
                f.insert(e.clone());
                f
            })
            .collect();
        assert_eq!(s.facets(), &expected);
    }

    #[test]
    fn star_at_vertex_is_a_relabeling() {
        let k = cx(&[&["a", "b"], &["a", "c"], &["b", "c", "d"]]);
        let s = star_subdivision(&k, &simplex(&["a"])).unwrap();
        let e = bary(&["a"]);
        let relabeled = SimplicialComplex::from_facets(s.facets().iter().map(|f| {
            f.iter()
                .map(|v| if *v == e { VertexLabel::original("a") } else { v.clone() })
                .collect()
        }))
        .unwrap();
        assert_eq!(relabeled, k);
        assert!(!s.vertices().contains(&VertexLabel::original("a")));
    }

    #[test]
    fn star_edge_cases() {
        let k = cx(&[&["a", "b"]]);
        assert_eq!(star_subdivision(&k, &Simplex::new()).unwrap(), k);
        assert_eq!(
            star_subdivision(&k, &simplex(&["a", "c"])),
            Err(ComplexError::NotASimplex(simplex(&["a", "c"])))
        );
    }

    #[test]
    fn barycentric_examples() {
        let boundary = cx(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let sd = barycentric(&boundary).unwrap();
        assert_eq!(sd.vertices().len(), 6);
        assert_eq!(sd.facets().len(), 6);
        assert!(sd.facets().iter().all(|f| f.len() == 2));

        let tri = cx(&[&["a", "b", "c"]]);
        let sd = barycentric(&tri).unwrap();
        assert_eq!(sd.vertices().len(), 7);
        assert_eq!(sd.facets().len(), 6);
        assert_eq!(sd.dimension(), Some(2));

        let pt = cx(&[&["p"]]);
        assert_eq!(barycentric(&pt).unwrap(), pt);
    }

    #[test]
    fn order_complex_examples() {
        let tri = cx(&[&["a", "b", "c"]]);
        let fl = order_complex(&tri).unwrap();
        assert_eq!(fl.vertices().len(), 7);
        assert_eq!(fl.facets().len(), 6);

        let discrete = cx(&[&["a"], &["b"], &["c"]]);
        let fl = order_complex(&discrete).unwrap();
        assert_eq!(fl.facets().len(), 3);
        assert!(fl.facets().iter().all(|f| f.len() == 1));

        let edge = cx(&[&["a", "b"]]);
        let fl = order_complex(&edge).unwrap();
        let ab = bary(&["a", "b"]);
        let expected: BTreeSet<Simplex> = [
            [bary(&["a"]), ab.clone()].into_iter().collect(),
            [bary(&["b"]), ab.clone()].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(fl.facets(), &expected);
    }

    #[test]
    fn natural_iso_examples() {
        for k in [cx(&[&["a", "b", "c"]]), cx(&[&["p"]]), cx(&[&["a", "b"], &["b", "c", "d"]])] {
            let r = check_natural_iso(&k).unwrap();
            assert!(r.is_iso, "{k:?}");
            assert_eq!(r.counterexample, None);
            assert_eq!(r.bijection.len(), k.simplices().len());
        }
    }

    #[test]
    fn natural_iso_on_iterated_subdivision() {
        // vertices of Sd(K) are themselves barycenters
        let k = barycentric(&cx(&[&["a", "b", "c"]])).unwrap();
        assert!(check_natural_iso(&k).unwrap().is_iso);
    }

    #[test]
    fn coloring_examples() {
        let c = color_by_dimension(&order_complex(&cx(&[&["a", "b", "c"]])).unwrap()).unwrap();
        assert!(c.valid);
        assert_eq!(c.num_colors(), 3);

        let c = color_by_dimension(&order_complex(&cx(&[&["a", "b"]])).unwrap()).unwrap();
        assert!(c.valid);
        let mut colors: Vec<usize> = c.colors.values().copied().collect();
        colors.sort();
        assert_eq!(colors, vec![0, 0, 1]);

        let c = color_by_dimension(&order_complex(&cx(&[&["p"]])).unwrap()).unwrap();
        assert_eq!(c.colors.values().copied().collect::<Vec<_>>(), vec![0]);

        assert!(matches!(
            color_by_dimension(&cx(&[&["a"]])),
            Err(ComplexError::NotAChainVertex(_))
        ));
    }

    #[test]
    fn limits() {
        let big: Vec<String> = (0..6).map(|i| alloc::format!("v{i}")).collect();
        let k = SimplicialComplex::from_facets([simplex(&big)]).unwrap();
        assert!(matches!(barycentric(&k), Err(ComplexError::TooLarge { .. })));
        let many = SimplicialComplex::from_facets(
            (0..33).map(|i| simplex(&[alloc::format!("v{i}")])),
        )
        .unwrap();
        assert!(matches!(order_complex(&many), Err(ComplexError::TooLarge { .. })));
    }
}
