//! Simplices and dynamic simplicial complexes with explicit face/coface
//! incidence.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::Field;

pub type Vertex = u32;

/// Stable integer id of a simplex inside a [`SimplicialComplex`]. Ids are
/// recycled after removal.
pub type SimplexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("simplex has no vertices")]
    Empty,
    #[error("vertex list {0:?} contains a repeated vertex")]
    RepeatedVertex(Vec<Vertex>),
    #[error("missing face {face} of {simplex}")]
    MissingFace { simplex: Simplex, face: Simplex },
    #[error("{0} is already present")]
    Duplicate(Simplex),
    #[error("{0} is absent")]
    Absent(Simplex),
    #[error("{simplex} has coface {coface}")]
    HasCoface { simplex: Simplex, coface: Simplex },
}

/// A simplex given by its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Builds a simplex from vertices in any order.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::Empty);
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(vertices));
        }
        Ok(Simplex(vertices))
    }

    /// Panics on an empty or repeating vertex list. Meant for literals.
    pub fn from_slice(vertices: &[Vertex]) -> Self {
        Simplex::new(vertices.to_vec()).expect("valid vertex list")
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-1 faces; the `k`-th omits vertex `k`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |k| {
            let mut v = self.0.clone();
            v.remove(k);
            Simplex(v)
        })
    }

    /// Signed boundary `sum_k (-1)^k [v_0 .. ^v_k .. v_q]`; empty for a vertex.
    pub fn boundary(&self, field: &Field) -> Vec<(Simplex, u32)> {
        self.facets()
            .enumerate()
            .map(|(k, face)| (face, field.sign(k)))
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() < other.0.len() && self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone)]
struct Node {
    simplex: Simplex,
    /// Facet ids in the order of [`Simplex::facets`].
    facets: Vec<SimplexId>,
    cofacets: Vec<SimplexId>,
}

/// A simplicial complex supporting insertion of simplices whose faces are
/// present and removal of maximal simplices.
#[derive(Debug, Clone, Default)]
pub struct SimplicialComplex {
    index: HashMap<Simplex, SimplexId>,
    nodes: Vec<Option<Node>>,
    free: Vec<SimplexId>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// One past the largest id handed out so far.
    pub fn id_bound(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn id_of(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    /// Panics if `id` is not live.
    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.node(id).simplex
    }

    pub fn dim_of(&self, id: SimplexId) -> usize {
        self.node(id).simplex.dim()
    }

    fn node(&self, id: SimplexId) -> &Node {
        self.nodes[id as usize].as_ref().expect("live simplex id")
    }

    /// Facet ids of a live simplex, ordered so that the `k`-th carries sign `(-1)^k`.
    pub fn facet_ids(&self, id: SimplexId) -> &[SimplexId] {
        &self.node(id).facets
    }

    pub fn cofacet_ids(&self, id: SimplexId) -> &[SimplexId] {
        &self.node(id).cofacets
    }

    pub fn iter(&self) -> impl Iterator<Item = (SimplexId, &Simplex)> {
        self.index.iter().map(|(s, &id)| (id, s))
    }

    pub fn insert(&mut self, s: Simplex) -> Result<SimplexId, ComplexError> {
        if self.index.contains_key(&s) {
            return Err(ComplexError::Duplicate(s));
        }
        let mut facets = Vec::with_capacity(s.0.len());
        for face in s.facets() {
            match self.index.get(&face) {
                Some(&id) => facets.push(id),
                None => {
                    return Err(ComplexError::MissingFace {
                        simplex: s.clone(),
                        face,
                    })
                }
            }
        }
        let id = match self.free.pop() {
            Some(id) => id,
            None => {
                self.nodes.push(None);
                (self.nodes.len() - 1) as SimplexId
            }
        };
        for &f in &facets {
            self.nodes[f as usize]
                .as_mut()
                .expect("live facet")
                .cofacets
                .push(id);
        }
        self.index.insert(s.clone(), id);
        self.nodes[id as usize] = Some(Node {
            simplex: s,
            facets,
            cofacets: Vec::new(),
        });
        Ok(id)
    }

    pub fn remove(&mut self, s: &Simplex) -> Result<SimplexId, ComplexError> {
        let id = self
            .id_of(s)
            .ok_or_else(|| ComplexError::Absent(s.clone()))?;
        if let Some(&c) = self.node(id).cofacets.first() {
            return Err(ComplexError::HasCoface {
                simplex: s.clone(),
                coface: self.simplex(c).clone(),
            });
        }
        let node = self.nodes[id as usize].take().expect("live simplex");
        for f in node.facets {
            let cof = &mut self.nodes[f as usize].as_mut().expect("live facet").cofacets;
            let pos = cof.iter().position(|&c| c == id).expect("coface link");
            cof.swap_remove(pos);
        }
        self.index.remove(s);
        self.free.push(id);
        Ok(id)
    }

    pub fn cofacets(&self, s: &Simplex) -> Result<Vec<Simplex>, ComplexError> {
        let id = self
            .id_of(s)
            .ok_or_else(|| ComplexError::Absent(s.clone()))?;
        let mut out: Vec<Simplex> = self
            .cofacet_ids(id)
            .iter()
            .map(|&c| self.simplex(c).clone())
            .collect();
        out.sort();
        Ok(out)
    }

    /// All simplices, sorted by (dimension, vertices).
    pub fn simplices(&self) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = self.index.keys().cloned().collect();
        v.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        v
    }

    /// Checks closure and face/coface link consistency.
    pub fn check_consistency(&self) -> Result<(), String> {
        for (s, &id) in &self.index {
            let node = self.node(id);
            if &node.simplex != s {
                return Err(format!("id {id} maps to {} not {s}", node.simplex));
            }
            for (face, &fid) in s.facets().zip(&node.facets) {
                if self.id_of(&face) != Some(fid) {
                    return Err(format!("face {face} of {s} missing or mislinked"));
                }
                if !self.node(fid).cofacets.contains(&id) {
                    return Err(format!("{face} lacks coface link to {s}"));
                }
            }
            for &c in &node.cofacets {
                if !self.node(c).facets.contains(&id) {
                    return Err(format!("coface link {s} -> {} not reciprocated", self.simplex(c)));
                }
            }
        }
        Ok(())
    }
}
