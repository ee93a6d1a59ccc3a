//! Naive dual complexes of strict normal crossings divisors.
//!
//! A presentation `{D_i}` of an snc divisor gives a complex with one vertex
//! per `D_i` and a simplex `J` whenever `D_J` is nonempty. Blowing up a stratum
//! `D_sigma` replaces the complex by its star subdivision at `sigma`, the new
//! vertex standing for the exceptional divisor. Blowing up all strata from the
//! deepest up yields the barycentric subdivision, whose vertices can be
//! colored by dimension into at most `d` pairwise disjoint classes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::simplicial::{
    color_by_dimension, natural_map, star_subdivision, ComplexError, Simplex, SimplicialComplex,
    VertexLabel,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualError {
    Complex(ComplexError),
    /// A vertex that is neither a declared divisor nor a logged exceptional
    /// divisor.
    UnknownVertex(VertexLabel),
    DuplicateDivisor(String),
    /// The complex has dimension `dim`, which must stay below the ambient
    /// dimension.
    DimensionTooLarge { dim: usize, ambient: usize },
    ZeroAmbient,
}

impl fmt::Display for DualError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualError::Complex(e) => e.fmt(f),
            DualError::UnknownVertex(v) => write!(f, "vertex {v} is not a declared divisor"),
            DualError::DuplicateDivisor(d) => write!(f, "divisor {d} declared twice"),
            DualError::DimensionTooLarge { dim, ambient } => write!(
                f,
                "dual complex of dimension {dim} needs ambient dimension above {dim}, got {ambient}"
            ),
            DualError::ZeroAmbient => write!(f, "ambient dimension must be positive"),
        }
    }
}

impl core::error::Error for DualError {}

impl From<ComplexError> for DualError {
    fn from(e: ComplexError) -> Self {
        DualError::Complex(e)
    }
}

/// An exceptional divisor created by blowing up the stratum `D_source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceptional {
    pub vertex: VertexLabel,
    pub source: Simplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    complex: SimplicialComplex,
    divisors: Vec<String>,
    ambient_dim: usize,
    exceptional: Vec<Exceptional>,
}

impl DualComplex {
    /// Divisors that meet no other divisor may be listed in `divisors` only;
    /// they become isolated vertices.
    pub fn new(
        complex: SimplicialComplex,
        divisors: Vec<String>,
        ambient_dim: usize,
        exceptional: Vec<Exceptional>,
    ) -> Result<Self, DualError> {
        if ambient_dim == 0 {
            return Err(DualError::ZeroAmbient);
        }
        let mut names = BTreeSet::new();
        for d in &divisors {
            if !names.insert(d.clone()) {
                return Err(DualError::DuplicateDivisor(d.clone()));
            }
        }
        let logged: BTreeSet<&VertexLabel> = exceptional.iter().map(|e| &e.vertex).collect();
        for v in complex.vertices() {
            let known = match &v {
                VertexLabel::Original(name) => names.contains(name),
                VertexLabel::Barycenter(_) => logged.contains(&v),
            };
            if !known {
                return Err(DualError::UnknownVertex(v));
            }
        }
        let present = complex.vertices();
        let isolated = divisors
            .iter()
            .map(VertexLabel::original)
            .filter(|v| !present.contains(v))
            .map(|v| core::iter::once(v).collect::<Simplex>());
        let complex = SimplicialComplex::from_facets(complex.facets().iter().cloned().chain(isolated))?;
        if let Some(dim) = complex.dimension() {
            if dim + 1 > ambient_dim {
                return Err(DualError::DimensionTooLarge {
                    dim,
                    ambient: ambient_dim,
                });
            }
        }
        Ok(DualComplex {
            complex,
            divisors,
            ambient_dim,
            exceptional,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn divisors(&self) -> &[String] {
        &self.divisors
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Exceptional divisors in the order they were created.
    pub fn exceptional_log(&self) -> &[Exceptional] {
        &self.exceptional
    }
}

/// Blows up the stratum `D_sigma`. An empty `sigma` changes nothing.
pub fn blowup(dual: &DualComplex, sigma: &Simplex) -> Result<DualComplex, DualError> {
    if sigma.is_empty() {
        return Ok(dual.clone());
    }
    let complex = star_subdivision(&dual.complex, sigma)?;
    let mut exceptional = dual.exceptional.clone();
    exceptional.push(Exceptional {
        vertex: VertexLabel::Barycenter(sigma.clone()),
        source: sigma.clone(),
    });
    Ok(DualComplex {
        complex,
        divisors: dual.divisors.clone(),
        ambient_dim: dual.ambient_dim,
        exceptional,
    })
}

/// Blows up every stratum of the original divisor, deepest strata first
/// (largest simplices), then the strict transforms of the next layer, down
/// to the pairwise intersections. Returns the result and the blown-up
/// simplices in order.
pub fn stratified_blowup_sequence(dual: &DualComplex) -> Result<(DualComplex, Vec<Simplex>), DualError> {
    dual.complex.check_limits()?;
    let strata = dual.complex.simplices();
    let top = dual.complex.dimension().unwrap_or(0) + 1;
    let mut current = dual.clone();
    let mut trace = Vec::new();
    for card in (2..=top).rev() {
        for sigma in strata.iter().filter(|s| s.len() == card) {
            current = blowup(&current, sigma)?;
            trace.push(sigma.clone());
        }
    }
    Ok((current, trace))
}

/// A covering of the divisor by classes of pairwise disjoint components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub groups: Vec<Vec<VertexLabel>>,
}

impl Presentation {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// True iff no simplex of `complex` meets a class twice, so each class is
    /// an independent set of the 1-skeleton.
    pub fn classes_independent(&self, complex: &SimplicialComplex) -> bool {
        let class: BTreeMap<&VertexLabel, usize> = self
            .groups
            .iter()
            .enumerate()
            .flat_map(|(k, g)| g.iter().map(move |v| (v, k)))
            .collect();
        complex.facets().iter().all(|f| {
            let hit: BTreeSet<usize> = f.iter().filter_map(|v| class.get(v).copied()).collect();
            hit.len() == f.iter().filter(|v| class.contains_key(v)).count()
        })
    }
}

/// Blows up all strata and groups the resulting components by the dimension
/// of the stratum they come from. The result has at most `ambient_dim`
/// classes; with `pad` set, isolated dummy components (blowups of points off
/// the divisor) are added until there are exactly `ambient_dim` classes.
pub fn reduce_presentation(
    dual: &DualComplex,
    ambient_dim: usize,
    pad: bool,
) -> Result<(DualComplex, Presentation), DualError> {
    if ambient_dim == 0 {
        return Err(DualError::ZeroAmbient);
    }
    if let Some(dim) = dual.complex.dimension() {
        if dim + 1 > ambient_dim {
            return Err(DualError::DimensionTooLarge {
                dim,
                ambient: ambient_dim,
            });
        }
    }
    let (blown, _) = stratified_blowup_sequence(dual)?;
    let to_flags = |v: &VertexLabel| natural_map(&dual.complex, v);
    let flags = SimplicialComplex::from_facets(
        blown
            .complex
            .facets()
            .iter()
            .map(|f| f.iter().map(to_flags).collect()),
    )?;
    let coloring = color_by_dimension(&flags)?;
    let mut by_color: BTreeMap<usize, Vec<VertexLabel>> = BTreeMap::new();
    for v in blown.complex.vertices() {
        let color = coloring.colors[&to_flags(&v)];
        by_color.entry(color).or_default().push(v);
    }
    let mut groups: Vec<Vec<VertexLabel>> = by_color.into_values().collect();
    if pad {
        let mut k = 0;
        while groups.len() < ambient_dim {
            groups.push(alloc::vec![VertexLabel::Original(format!("pad{k}"))]);
            k += 1;
        }
    }
    Ok((blown, Presentation { groups }))
}
