//! Dense Gaussian elimination over `Z/pZ`.

use crate::field::Field;

struct EchelonRow {
    pivot: usize,
    vec: Vec<u32>,
    tag: Vec<u32>,
}

/// Row echelon basis built incrementally. Every stored row has pivot entry 1
/// and is zero at the pivots of the rows stored before it, so a vector is
/// reduced by one pass in insertion order. Each row carries a tag recording
/// the combination of inserted vectors it came from.
pub(crate) struct Echelon {
    field: Field,
    rows: Vec<EchelonRow>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `(v, tag)` against the basis in place.
    fn reduce(&self, v: &mut [u32], tag: &mut [u32]) {
        let f = &self.field;
        for r in &self.rows {
            let c = v[r.pivot];
            if c == 0 {
                continue;
            }
            let m = f.neg(c);
            for (a, &b) in v.iter_mut().zip(&r.vec) {
                if b != 0 {
                    *a = f.add(*a, f.mul(m, b));
                }
            }
            for (a, &b) in tag.iter_mut().zip(&r.tag) {
                if b != 0 {
                    *a = f.add(*a, f.mul(m, b));
                }
            }
        }
    }

    /// Inserts `v` with its tag. Returns `None` if `v` was independent, or
    /// the reduced tag (a dependency among inserted vectors) otherwise.
    pub fn insert(&mut self, mut v: Vec<u32>, mut tag: Vec<u32>) -> Option<Vec<u32>> {
        self.reduce(&mut v, &mut tag);
        match v.iter().position(|&x| x != 0) {
            None => Some(tag),
            Some(pivot) => {
                let inv = self.field.inv(v[pivot]).expect("nonzero pivot");
                for x in v.iter_mut().chain(tag.iter_mut()) {
                    *x = self.field.mul(*x, inv);
                }
                self.rows.push(EchelonRow { pivot, vec: v, tag });
                None
            }
        }
    }

    pub fn insert_untagged(&mut self, v: Vec<u32>) -> bool {
        let before = self.rank();
        self.insert(v, Vec::new());
        self.rank() > before
    }

    /// Coordinates of `v` in terms of the tags, if `v` lies in the span.
    pub fn express(&self, v: &[u32], tag_len: usize) -> Option<Vec<u32>> {
        let mut v = v.to_vec();
        let mut tag = vec![0; tag_len];
        self.reduce(&mut v, &mut tag);
        if v.iter().any(|&x| x != 0) {
            return None;
        }
        Some(tag.into_iter().map(|x| self.field.neg(x)).collect())
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

pub(crate) fn rank(field: Field, rows: &[Vec<u32>]) -> usize {
    let mut e = Echelon::new(field);
    for r in rows {
        e.insert_untagged(r.clone());
    }
    e.rank()
}

/// Basis of `{ l : sum_i l_i rows[i] = 0 }`.
pub(crate) fn left_kernel(field: Field, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = rows.len();
    let mut e = Echelon::new(field);
    rows.iter()
        .enumerate()
        .filter_map(|(i, r)| e.insert(r.clone(), unit(n, i)))
        .collect()
}

/// `sum_i coeffs[i] * rows[i]`.
pub(crate) fn combine(field: Field, coeffs: &[u32], rows: &[Vec<u32>], len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for (&c, r) in coeffs.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(r) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}
