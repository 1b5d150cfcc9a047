//! Random valid zigzag filtrations on a bounded vertex set, for fuzzing the
//! engine against the oracle.

use rand::Rng;

use super::{ArrowOp, ZigzagFiltration};
use crate::simplicial::{Simplex, SimplicialComplex};

#[derive(Debug, Clone, Copy)]
pub struct RandomParams {
    pub vertices: u32,
    /// Arrow count is drawn uniformly from `1..=max_arrows`.
    pub max_arrows: usize,
    pub max_dim: usize,
    /// Probability of choosing an insertion when both kinds are possible.
    pub insert_bias: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            vertices: 6,
            max_arrows: 60,
            max_dim: 2,
            insert_bias: 0.6,
        }
    }
}

fn all_simplices(vertices: u32, max_dim: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << vertices) {
        let v: Vec<u32> = (0..vertices).filter(|b| mask >> b & 1 == 1).collect();
        if v.len() <= max_dim + 1 {
            out.push(Simplex::new(v).expect("distinct"));
        }
    }
    out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    out
}

pub fn random_filtration<R: Rng + ?Sized>(rng: &mut R, params: RandomParams) -> ZigzagFiltration {
    let universe = all_simplices(params.vertices.min(16), params.max_dim);
    let len = rng.random_range(1..=params.max_arrows.max(1));
    let mut complex = SimplicialComplex::new();
    let mut ops = Vec::with_capacity(len);
    for _ in 0..len {
        let insertable: Vec<&Simplex> = universe
            .iter()
            .filter(|s| !complex.contains(s) && s.facets().all(|f| complex.contains(&f)))
            .collect();
        let removable: Vec<Simplex> = complex
            .iter()
            .filter(|(id, _)| complex.cofacet_ids(*id).is_empty())
            .map(|(_, s)| s.clone())
            .collect();
        let insert = match (insertable.is_empty(), removable.is_empty()) {
            (true, true) => break,
            (false, true) => true,
            (true, false) => false,
            (false, false) => rng.random_bool(params.insert_bias),
        };
        if insert {
            let s = insertable[rng.random_range(0..insertable.len())].clone();
            complex.insert(s.clone()).expect("insertable");
            ops.push(ArrowOp::insert(s));
        } else {
            let mut removable = removable;
            removable.sort();
            let s = removable.swap_remove(rng.random_range(0..removable.len()));
            complex.remove(&s).expect("maximal");
            ops.push(ArrowOp::delete(s));
        }
    }
    ZigzagFiltration::new(ops).expect("generated ops replay")
}
