//! Independent ground truth for the engine: Betti numbers by boundary rank,
//! textbook column-reduction persistence for forward filtrations, and
//! brute-force interval decomposition of explicit zigzag modules.
//!
//! Everything here is dense linear algebra and shares no code with the
//! engine beyond the basic types.

pub(crate) mod dense;
mod module;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::diagram::{Death, Interval, PersistenceDiagram};
use crate::field::Field;
use crate::filtration::ZigzagFiltration;
use crate::simplicial::{Simplex, SimplicialComplex};

pub use crate::diagram::{compare_diagrams, DiagramComparison};
pub use module::{interval_multiplicities, module_from_filtration, ModuleMap, ZigzagModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("filtration is not forward-only (arrow {0} is a removal)")]
    NotForward(usize),
    #[error("malformed module: {0}")]
    Shape(String),
    #[error("oracle inconsistency: {0}")]
    Inconsistent(String),
}

/// Bounds on the brute-force module oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_arrows: usize,
    pub max_space_dim: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_arrows: 200,
            max_space_dim: 64,
        }
    }
}

/// `dim ker ∂_q - rank ∂_{q+1}` over `field`.
pub fn betti(complex: &SimplicialComplex, q: usize, field: Field) -> usize {
    let simplices = complex.simplices();
    let index = |d: usize| -> HashMap<&Simplex, usize> {
        simplices
            .iter()
            .filter(|s| s.dim() == d)
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect()
    };
    let boundary_rank = |d: usize| -> usize {
        if d == 0 {
            return 0;
        }
        let faces = index(d - 1);
        let rows: Vec<Vec<u32>> = simplices
            .iter()
            .filter(|s| s.dim() == d)
            .map(|s| {
                let mut row = vec![0; faces.len()];
                for (face, c) in s.boundary(&field) {
                    row[faces[&face]] = c;
                }
                row
            })
            .collect();
        dense::rank(field, &rows)
    };
    let n_q = simplices.iter().filter(|s| s.dim() == q).count();
    n_q - boundary_rank(q) - boundary_rank(q + 1)
}

/// Classical column reduction of the boundary matrix of a forward filtration.
/// Simplex `j` (0-based) enters at arrow `j + 1`; a pair `(i, j)` becomes the
/// interval `(dim σ_i, i + 1, j + 1)`.
pub fn std_persistence(fil: &ZigzagFiltration, field: Field) -> Result<PersistenceDiagram, OracleError> {
    if let Some(t) = fil.ops().iter().position(|op| !op.is_insert()) {
        return Err(OracleError::NotForward(t + 1));
    }
    let position: HashMap<&Simplex, usize> = fil
        .ops()
        .iter()
        .enumerate()
        .map(|(j, op)| (&op.simplex, j))
        .collect();
    // Sparse columns keyed by row position; `low` is the largest key.
    let mut columns: Vec<BTreeMap<usize, u32>> = Vec::with_capacity(fil.len());
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; fil.len()];
    let mut intervals = Vec::new();
    for (j, op) in fil.ops().iter().enumerate() {
        let mut col: BTreeMap<usize, u32> = op
            .simplex
            .boundary(&field)
            .into_iter()
            .map(|(face, c)| (position[&face], c))
            .collect();
        while let Some((&low, &c)) = col.iter().next_back() {
            let Some(&k) = low_owner.get(&low) else { break };
            let other = &columns[k];
            let m = field.neg(field.div(c, other[&low]).expect("pivot is nonzero"));
            for (&r, &v) in other {
                let e = col.entry(r).or_insert(0);
                *e = field.add(*e, field.mul(m, v));
                if *e == 0 {
                    col.remove(&r);
                }
            }
        }
        if let Some((&low, _)) = col.iter().next_back() {
            low_owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            intervals.push(Interval::finite(fil.ops()[low].simplex.dim(), low + 1, j + 1));
        }
        columns.push(col);
    }
    for (j, op) in fil.ops().iter().enumerate() {
        if !paired[j] {
            intervals.push(Interval::infinite(op.simplex.dim(), j + 1));
        }
    }
    Ok(PersistenceDiagram::new(intervals))
}

/// Diagram of a zigzag filtration by decomposing its homology modules in
/// every degree up to the top simplex dimension.
pub fn oracle_diagram(
    fil: &ZigzagFiltration,
    field: Field,
    limits: OracleLimits,
) -> Result<PersistenceDiagram, OracleError> {
    let n = fil.len();
    let mut intervals = Vec::new();
    for q in 0..=fil.max_dim().unwrap_or(0) {
        let module = module_from_filtration(fil, q, field, limits)?;
        for (b, d, count) in interval_multiplicities(&module)? {
            let death = if d == n { Death::End } else { Death::Arrow(d + 1) };
            intervals.extend(std::iter::repeat_n(Interval::new(q, b, death), count));
        }
    }
    Ok(PersistenceDiagram::new(intervals))
}
