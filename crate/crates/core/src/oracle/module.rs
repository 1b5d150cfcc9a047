//! Explicit zigzag modules and their interval decomposition by brute force.

use std::collections::{BTreeMap, BTreeSet};

use super::dense::{combine, left_kernel, unit, Echelon};
use super::{OracleError, OracleLimits};
use crate::field::Field;
use crate::filtration::ZigzagFiltration;
use crate::simplicial::Simplex;

/// One arrow of a module. `matrix` maps column vectors of the source space
/// to the target space, so it has `dim(target)` rows. A forward map goes
/// `V_i -> V_{i+1}`, a backward one `V_{i+1} -> V_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    pub forward: bool,
    pub matrix: Vec<Vec<u32>>,
}

/// A zigzag module `V_1 <-> V_2 <-> ... <-> V_n` over a prime field.
/// `dims[k]` is `dim V_{k+1}` and `maps[k]` connects `V_{k+1}` and `V_{k+2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagModule {
    field: Field,
    dims: Vec<usize>,
    maps: Vec<ModuleMap>,
}

impl ZigzagModule {
    pub fn new(field: Field, dims: Vec<usize>, maps: Vec<ModuleMap>) -> Result<Self, OracleError> {
        if dims.len() != maps.len() + 1 && !(dims.is_empty() && maps.is_empty()) {
            return Err(OracleError::Shape(format!(
                "{} spaces need {} maps, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let (src, dst) = if m.forward {
                (dims[k], dims[k + 1])
            } else {
                (dims[k + 1], dims[k])
            };
            if m.matrix.len() != dst || m.matrix.iter().any(|r| r.len() != src) {
                return Err(OracleError::Shape(format!(
                    "map {} must be {dst}x{src}",
                    k + 1
                )));
            }
        }
        Ok(ZigzagModule { field, dims, maps })
    }

    /// `⊕ I[b; d]` over the given orientations, with closed 1-based
    /// intervals and identity maps between the summands they share.
    pub fn from_intervals(
        field: Field,
        forward: &[bool],
        intervals: &[(usize, usize)],
    ) -> Result<Self, OracleError> {
        let n = forward.len() + 1;
        let members = |i: usize| -> Vec<usize> {
            (0..intervals.len())
                .filter(|&j| intervals[j].0 <= i && i <= intervals[j].1)
                .collect()
        };
        let dims = (1..=n).map(|i| members(i).len()).collect();
        let maps = (1..n)
            .map(|i| {
                let (src, dst) = if forward[i - 1] {
                    (members(i), members(i + 1))
                } else {
                    (members(i + 1), members(i))
                };
                let matrix = dst
                    .iter()
                    .map(|a| src.iter().map(|b| u32::from(a == b)).collect())
                    .collect();
                ModuleMap {
                    forward: forward[i - 1],
                    matrix,
                }
            })
            .collect();
        ZigzagModule::new(field, dims, maps)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[ModuleMap] {
        &self.maps
    }

    /// Number of spaces.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// Homology of one complex in a fixed degree: a chain basis, and cycle
/// representatives of a homology basis.
struct Homology {
    index: BTreeMap<Simplex, usize>,
    reps: Vec<Vec<u32>>,
    /// Boundaries followed by the representatives; tags give homology coordinates.
    solver: Echelon,
}

fn homology(field: Field, complex: &BTreeSet<Simplex>, q: usize) -> Homology {
    let of_dim = |d: usize| -> BTreeMap<Simplex, usize> {
        complex
            .iter()
            .filter(|s| s.dim() == d)
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect()
    };
    let index = of_dim(q);
    let n = index.len();
    let boundary_rows = |simplices: &BTreeMap<Simplex, usize>, target: &BTreeMap<Simplex, usize>| {
        simplices
            .keys()
            .map(|s| {
                let mut row = vec![0; target.len()];
                for (face, c) in s.boundary(&field) {
                    row[target[&face]] = c;
                }
                row
            })
            .collect::<Vec<_>>()
    };

    let cycles = if q == 0 {
        (0..n).map(|i| unit(n, i)).collect()
    } else {
        left_kernel(field, &boundary_rows(&index, &of_dim(q - 1)))
    };
    let boundaries = boundary_rows(&of_dim(q + 1), &index);

    let mut span = Echelon::new(field);
    for b in &boundaries {
        span.insert_untagged(b.clone());
    }
    let reps: Vec<Vec<u32>> = cycles
        .into_iter()
        .filter(|z| span.insert_untagged(z.clone()))
        .collect();

    let h = reps.len();
    let mut solver = Echelon::new(field);
    for b in boundaries {
        solver.insert(b, vec![0; h]);
    }
    for (i, r) in reps.iter().enumerate() {
        solver.insert(r.clone(), unit(h, i));
    }
    Homology {
        index,
        reps,
        solver,
    }
}

/// Matrix of the map induced by the inclusion `from ⊆ to`.
fn induced(from: &Homology, to: &Homology) -> Vec<Vec<u32>> {
    let h = to.reps.len();
    let columns: Vec<Vec<u32>> = from
        .reps
        .iter()
        .map(|rep| {
            let mut v = vec![0; to.index.len()];
            for (s, &i) in &from.index {
                v[to.index[s]] = rep[i];
            }
            to.solver.express(&v, h).expect("cycle of a subcomplex")
        })
        .collect();
    (0..h)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect()
}

/// Degree-`q` homology module of the complexes `K_1, ..., K_n`.
pub fn module_from_filtration(
    fil: &ZigzagFiltration,
    q: usize,
    field: Field,
    limits: OracleLimits,
) -> Result<ZigzagModule, OracleError> {
    if fil.len() > limits.max_arrows {
        return Err(OracleError::SizeGuard(format!(
            "{} arrows exceed the limit of {}",
            fil.len(),
            limits.max_arrows
        )));
    }
    let mut complex = BTreeSet::new();
    let mut prev: Option<Homology> = None;
    let mut dims = Vec::with_capacity(fil.len());
    let mut maps = Vec::with_capacity(fil.len().saturating_sub(1));
    for op in fil.ops() {
        if op.is_insert() {
            complex.insert(op.simplex.clone());
        } else {
            complex.remove(&op.simplex);
        }
        let cur = homology(field, &complex, q);
        if cur.reps.len() > limits.max_space_dim {
            return Err(OracleError::SizeGuard(format!(
                "homology of dimension {} exceeds the limit of {}",
                cur.reps.len(),
                limits.max_space_dim
            )));
        }
        dims.push(cur.reps.len());
        if let Some(p) = &prev {
            let matrix = if op.is_insert() {
                induced(p, &cur)
            } else {
                induced(&cur, p)
            };
            maps.push(ModuleMap {
                forward: op.is_insert(),
                matrix,
            });
        }
        prev = Some(cur);
    }
    ZigzagModule::new(field, dims, maps)
}

/// A linear relation `R ⊆ V_b × V_d`, as a basis of concatenated `[x | z]`.
struct Relation {
    left: usize,
    right: usize,
    rows: Vec<Vec<u32>>,
}

impl Relation {
    fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = unit(2 * n, i);
                r[n + i] = 1;
                r
            })
            .collect();
        Relation {
            left: n,
            right: n,
            rows,
        }
    }

    /// Number of interval summands covering both ends:
    /// `rank(proj_left) + rank(proj_right) - dim R`.
    fn rank(&self, field: Field) -> usize {
        let mut l = Echelon::new(field);
        let mut r = Echelon::new(field);
        for row in &self.rows {
            l.insert_untagged(row[..self.left].to_vec());
            r.insert_untagged(row[self.left..].to_vec());
        }
        l.rank() + r.rank() - self.rows.len()
    }

    /// `R ; A` where `A ⊆ V_d × V_{d+1}` is the relation of `map`.
    fn compose(&self, field: Field, map: &ModuleMap, next_dim: usize) -> Relation {
        let mid = self.right;
        // Pairs (y', z) spanning A.
        let arrow: Vec<(Vec<u32>, Vec<u32>)> = if map.forward {
            (0..mid)
                .map(|i| (unit(mid, i), (0..next_dim).map(|r| map.matrix[r][i]).collect()))
                .collect()
        } else {
            (0..next_dim)
                .map(|j| ((0..mid).map(|r| map.matrix[r][j]).collect(), unit(next_dim, j)))
                .collect()
        };
        let mut stacked: Vec<Vec<u32>> = self.rows.iter().map(|r| r[self.left..].to_vec()).collect();
        stacked.extend(arrow.iter().map(|(y, _)| y.clone()));
        let xs: Vec<Vec<u32>> = self.rows.iter().map(|r| r[..self.left].to_vec()).collect();
        let zs: Vec<Vec<u32>> = arrow.into_iter().map(|(_, z)| z).collect();
        let k = self.rows.len();

        let mut basis = Echelon::new(field);
        let mut rows = Vec::new();
        for lam in left_kernel(field, &stacked) {
            let x = combine(field, &lam[..k], &xs, self.left);
            let z = combine(field, &lam[k..], &zs, next_dim);
            let mut row = x;
            row.extend(z.into_iter().map(|v| field.neg(v)));
            if basis.insert_untagged(row.clone()) {
                rows.push(row);
            }
        }
        Relation {
            left: self.left,
            right: next_dim,
            rows,
        }
    }
}

/// Closed 1-based intervals `[b, d]` with their multiplicities, sorted.
pub fn interval_multiplicities(
    module: &ZigzagModule,
) -> Result<Vec<(usize, usize, usize)>, OracleError> {
    let n = module.len();
    let field = module.field;
    // r[b][d] for 1 <= b <= d <= n; zero elsewhere (including b = 0, d = n + 1).
    let mut r = vec![vec![0usize; n + 2]; n + 2];
    for b in 1..=n {
        let mut rel = Relation::identity(module.dims[b - 1]);
        r[b][b] = module.dims[b - 1];
        for d in b + 1..=n {
            if r[b][d - 1] == 0 {
                break;
            }
            rel = rel.compose(field, &module.maps[d - 2], module.dims[d - 1]);
            r[b][d] = rel.rank(field);
        }
    }
    let mut out = Vec::new();
    for b in 1..=n {
        for d in b..=n {
            let m = r[b][d] as i64 - r[b - 1][d] as i64 - r[b][d + 1] as i64
                + r[b - 1][d + 1] as i64;
            if m < 0 {
                return Err(OracleError::Inconsistent(format!(
                    "negative multiplicity {m} for [{b}; {d}]"
                )));
            }
            if m > 0 {
                out.push((b, d, m as usize));
            }
        }
    }
    Ok(out)
}
