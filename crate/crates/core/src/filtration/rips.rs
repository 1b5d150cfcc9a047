//! Rips filtrations and oscillating Rips zigzags.

use std::cmp::Ordering;

use log::warn;

use super::{ArrowOp, FiltrationError, PointCloud, ZigzagFiltration};
use crate::simplicial::Simplex;

/// Clique of the Rips graph together with its squared diameter.
struct Clique {
    simplex: Simplex,
    diam2: f64,
}

/// All cliques of at most `maxdim + 1` vertices among `vertices` whose
/// pairwise squared distances are at most `thr2`. Vertex ids are point indices.
fn rips_cliques(pc: &PointCloud, vertices: &[usize], thr2: f64, maxdim: usize) -> Vec<Clique> {
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    // Higher-indexed neighbours of each vertex (positions into `sorted`).
    let up: Vec<Vec<usize>> = (0..sorted.len())
        .map(|a| {
            (a + 1..sorted.len())
                .filter(|&b| pc.dist2(sorted[a], sorted[b]) <= thr2)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(maxdim + 1);
    for a in 0..sorted.len() {
        stack.push(a);
        expand(pc, &sorted, &up, &mut stack, &up[a], 0.0, maxdim, &mut out);
        stack.pop();
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn expand(
    pc: &PointCloud,
    sorted: &[usize],
    up: &[Vec<usize>],
    stack: &mut Vec<usize>,
    candidates: &[usize],
    diam2: f64,
    maxdim: usize,
    out: &mut Vec<Clique>,
) {
    let simplex = Simplex::new(stack.iter().map(|&i| sorted[i] as u32).collect())
        .expect("distinct vertices");
    out.push(Clique { simplex, diam2 });
    if stack.len() > maxdim {
        return;
    }
    for (k, &c) in candidates.iter().enumerate() {
        let next: Vec<usize> = candidates[k + 1..]
            .iter()
            .copied()
            .filter(|x| up[c].binary_search(x).is_ok())
            .collect();
        let d = stack
            .iter()
            .map(|&s| pc.dist2(sorted[s], sorted[c]))
            .fold(diam2, f64::max);
        stack.push(c);
        expand(pc, sorted, up, stack, &next, d, maxdim, out);
        stack.pop();
    }
}

fn dim_lex(a: &Simplex, b: &Simplex) -> Ordering {
    a.dim().cmp(&b.dim()).then_with(|| a.cmp(b))
}

/// Forward Rips filtration: every simplex of diameter at most `threshold`
/// and dimension at most `maxdim`, ordered by (diameter, dimension, vertices).
pub fn build_rips(pc: &PointCloud, threshold: f64, maxdim: usize) -> ZigzagFiltration {
    let all: Vec<usize> = (0..pc.len()).collect();
    let thr2 = if threshold >= 0.0 { threshold * threshold } else { -1.0 };
    let mut cliques = rips_cliques(pc, &all, thr2, maxdim);
    cliques.sort_by(|a, b| {
        a.diam2
            .total_cmp(&b.diam2)
            .then_with(|| dim_lex(&a.simplex, &b.simplex))
    });
    let ops = cliques.into_iter().map(|c| ArrowOp::insert(c.simplex)).collect();
    ZigzagFiltration::new(ops).expect("faces precede cofaces")
}

/// Greedy max-min ordering from point 0, ties broken by lowest index.
///
/// Returns the permutation and `eps`, where `eps[i]` is the distance from
/// the `(i+2)`-th chosen point to the first `i+1` (equivalently, the
/// Hausdorff distance from the first `i+1` points to the whole cloud), with
/// a trailing 0.
pub fn farthest_point_order(pc: &PointCloud) -> (Vec<usize>, Vec<f64>) {
    let n = pc.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut order = vec![0usize];
    let mut eps = Vec::with_capacity(n);
    let mut chosen = vec![false; n];
    chosen[0] = true;
    let mut mind2: Vec<f64> = (0..n).map(|j| pc.dist2(0, j)).collect();
    while order.len() < n {
        let mut best = usize::MAX;
        for j in 0..n {
            if !chosen[j] && (best == usize::MAX || mind2[j] > mind2[best]) {
                best = j;
            }
        }
        if mind2[best] == 0.0 {
            warn!("point {best} coincides with an earlier point");
        }
        eps.push(mind2[best].sqrt());
        chosen[best] = true;
        order.push(best);
        for j in 0..n {
            let d = pc.dist2(best, j);
            if d < mind2[j] {
                mind2[j] = d;
            }
        }
    }
    eps.push(0.0);
    (order, eps)
}

/// How simplices entering or leaving in one step of an oscillating Rips
/// zigzag are serialized. Insertions run in ascending order, removals in
/// descending order; both keep every intermediate set a complex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PhaseOrder {
    /// By diameter, then dimension, then vertices: the usual Rips refinement.
    #[default]
    Diameter,
    /// By dimension, then vertices.
    DimLex,
}

/// Oscillating Rips zigzag with multipliers `eta <= rho`.
///
/// With `P_i` the first `i` points of the max-min order and `e_i` the
/// matching radius, the complexes are
/// `R(P_1, eta e_1) -> R(P_2, rho e_1) <- R(P_2, eta e_2) -> R(P_3, rho e_2) <- ...`,
/// each step serialized as single-simplex arrows in [`PhaseOrder::Diameter`] order.
pub fn build_oscillating_rips(
    pc: &PointCloud,
    eta: f64,
    rho: f64,
    maxdim: usize,
) -> Result<ZigzagFiltration, FiltrationError> {
    build_oscillating_rips_with(pc, eta, rho, maxdim, PhaseOrder::default())
}

pub fn build_oscillating_rips_with(
    pc: &PointCloud,
    eta: f64,
    rho: f64,
    maxdim: usize,
    order: PhaseOrder,
) -> Result<ZigzagFiltration, FiltrationError> {
    if !(eta > 0.0 && eta <= rho && rho.is_finite()) {
        return Err(FiltrationError::InvalidParameter(format!(
            "eta must be <= rho and both positive (eta = {eta}, rho = {rho})"
        )));
    }
    let n = pc.len();
    let mut ops = Vec::new();
    if n == 0 {
        return Ok(ZigzagFiltration::default());
    }
    let (perm, eps) = farthest_point_order(pc);
    let scaled = |r: f64| r * r;
    let cmp = |a: &Clique, b: &Clique| match order {
        PhaseOrder::Diameter => a
            .diam2
            .total_cmp(&b.diam2)
            .then_with(|| dim_lex(&a.simplex, &b.simplex)),
        PhaseOrder::DimLex => dim_lex(&a.simplex, &b.simplex),
    };
    let sorted = |pts: &[usize], thr2: f64| {
        let mut v = rips_cliques(pc, pts, thr2, maxdim);
        v.sort_by(cmp);
        v
    };

    let mut current = sorted(&perm[..1], scaled(eta * eps[0]));
    ops.extend(current.iter().map(|c| ArrowOp::insert(c.simplex.clone())));
    for i in 1..n {
        let pts = &perm[..=i];
        let up = sorted(pts, scaled(rho * eps[i - 1]));
        ops.extend(sorted_difference(&up, &current, cmp).map(ArrowOp::insert));
        let down = sorted(pts, scaled(eta * eps[i]));
        let leaving: Vec<Simplex> = sorted_difference(&up, &down, cmp).collect();
        ops.extend(leaving.into_iter().rev().map(ArrowOp::delete));
        current = down;
    }
    Ok(ZigzagFiltration::new(ops).expect("oscillating Rips steps are nested"))
}

/// Simplices of `a` missing from `b`, both sorted by `cmp`.
fn sorted_difference<'a>(
    a: &'a [Clique],
    b: &'a [Clique],
    cmp: impl Fn(&Clique, &Clique) -> Ordering + 'a,
) -> impl Iterator<Item = Simplex> + 'a {
    let mut j = 0;
    a.iter().filter_map(move |c| {
        while j < b.len() && cmp(&b[j], c) == Ordering::Less {
            j += 1;
        }
        if j < b.len() && b[j].simplex == c.simplex {
            None
        } else {
            Some(c.simplex.clone())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: &[&[f64]]) -> PointCloud {
        PointCloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rips_examples() {
        let two = cloud(&[&[0.0], &[1.0]]);
        assert_eq!(build_rips(&two, 0.5, 1).len(), 2);

        let h = 3f64.sqrt() / 2.0;
        let tri = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]);
        // The equilateral side may round slightly above 1.
        let f = build_rips(&tri, 1.0 + 1e-12, 2);
        assert_eq!(f.len(), 7);
        assert_eq!(f.ops()[6].simplex, Simplex::from_slice(&[0, 1, 2]));

        let square = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        let f = build_rips(&square, 1.0, 1);
        assert_eq!(f.len(), 8);
    }

    #[test]
    fn rips_orders_by_diameter_then_dimension() {
        let pc = cloud(&[&[0.0], &[1.0], &[3.0]]);
        let f = build_rips(&pc, 10.0, 2);
        let names: Vec<String> = f.ops().iter().map(|o| o.simplex.to_string()).collect();
        assert_eq!(names, ["{0}", "{1}", "{2}", "{0,1}", "{1,2}", "{0,2}", "{0,1,2}"]);
    }

    #[test]
    fn farthest_point_examples() {
        let pc = cloud(&[&[0.0], &[1.0], &[10.0]]);
        let (order, eps) = farthest_point_order(&pc);
        assert_eq!(order, vec![0, 2, 1]);
        assert_eq!(eps, vec![10.0, 1.0, 0.0]);

        let (order, eps) = farthest_point_order(&cloud(&[&[4.0, 2.0]]));
        assert_eq!((order, eps), (vec![0], vec![0.0]));

        let (_, eps) = farthest_point_order(&cloud(&[&[1.0], &[1.0]]));
        assert!(eps.contains(&0.0));
    }

    #[test]
    fn farthest_point_order_is_max_min() {
        // Brute-force check: each chosen point maximizes the distance to the
        // points chosen before it, lowest index on ties.
        let pc = cloud(&[&[0.0, 0.0], &[2.0, 1.0], &[5.0, 5.0], &[1.0, 4.0], &[3.0, 3.0], &[0.5, 0.2]]);
        let (order, eps) = farthest_point_order(&pc);
        for k in 1..order.len() {
            let score = |j: usize| {
                order[..k]
                    .iter()
                    .map(|&c| pc.dist(c, j))
                    .fold(f64::INFINITY, f64::min)
            };
            let best = (0..pc.len())
                .filter(|j| !order[..k].contains(j))
                .fold(None::<usize>, |b, j| match b {
                    Some(b) if score(b) >= score(j) => Some(b),
                    _ => Some(j),
                })
                .unwrap();
            assert_eq!(order[k], best);
            assert_eq!(eps[k - 1], score(best));
        }
    }

    #[test]
    fn oscillating_rejects_bad_multipliers() {
        let pc = cloud(&[&[0.0], &[1.0]]);
        let err = build_oscillating_rips(&pc, 3.0, 2.0, 1).unwrap_err();
        assert!(err.to_string().contains("eta must be <= rho"));
        assert!(build_oscillating_rips(&pc, 2.7, 2.75, 1).is_ok());
        assert!(build_oscillating_rips(&pc, 0.0, 2.75, 1).is_err());
    }

    #[test]
    fn oscillating_steps_are_elementary_and_end_on_all_points() {
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 12.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let pc = PointCloud::new(pts).unwrap();
        let f = build_oscillating_rips(&pc, 2.0, 2.2, 2).unwrap();
        let last = f.final_complex();
        assert_eq!(last.len(), 12);
        assert!(last.simplices().iter().all(|s| s.dim() == 0));
    }

    #[test]
    fn phase_orders_share_complexes_and_differ_only_in_serialization() {
        let pts: Vec<Vec<f64>> = (0..9)
            .map(|k| {
                let a = k as f64 * 0.7;
                vec![a.cos() * (1.0 + 0.1 * k as f64), a.sin()]
            })
            .collect();
        let pc = PointCloud::new(pts).unwrap();
        let a = build_oscillating_rips_with(&pc, 2.0, 2.5, 2, PhaseOrder::Diameter).unwrap();
        let b = build_oscillating_rips_with(&pc, 2.0, 2.5, 2, PhaseOrder::DimLex).unwrap();
        assert_eq!(a.len(), b.len());
        let dirs = |f: &ZigzagFiltration| f.ops().iter().map(|o| o.is_insert()).collect::<Vec<_>>();
        assert_eq!(dirs(&a), dirs(&b));
        assert_eq!(a.max_complex_size(), b.max_complex_size());
        assert_eq!(a.final_complex().simplices(), b.final_complex().simplices());
        assert_ne!(a.ops(), b.ops());
    }
}
