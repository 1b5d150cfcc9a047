//! Sparse cochains as sorted `(column, coefficient)` pairs.

use super::keys::BirthKey;
use crate::field::Field;
use crate::simplicial::SimplexId;

pub type RowId = u32;

/// Role of a row in the maintained basis. `G` and `H` rows come in pairs
/// with `δ(g) = h`; each variant stores its partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    F,
    G(RowId),
    H(RowId),
}

#[derive(Debug, Clone)]
pub struct Row {
    pub entries: Vec<(SimplexId, u32)>,
    pub dim: usize,
    pub kind: RowKind,
    /// Present exactly on `F` rows.
    pub birth: Option<BirthKey>,
    /// The support column removed last; the row dies at its removal.
    pub pivot: SimplexId,
}

impl Row {
    pub fn get(&self, col: SimplexId) -> u32 {
        self.entries
            .binary_search_by_key(&col, |e| e.0)
            .map_or(0, |i| self.entries[i].1)
    }

    pub fn set(&mut self, col: SimplexId, value: u32) {
        match self.entries.binary_search_by_key(&col, |e| e.0) {
            Ok(i) if value == 0 => {
                self.entries.remove(i);
            }
            Ok(i) => self.entries[i].1 = value,
            Err(_) if value == 0 => {}
            Err(i) => self.entries.insert(i, (col, value)),
        }
    }
}

/// Writes `target + m * source` into `out`, listing columns that became
/// nonzero in `appeared` and columns that cancelled in `vanished`.
pub fn axpy(
    field: Field,
    target: &[(SimplexId, u32)],
    m: u32,
    source: &[(SimplexId, u32)],
    out: &mut Vec<(SimplexId, u32)>,
    appeared: &mut Vec<SimplexId>,
    vanished: &mut Vec<SimplexId>,
) {
    out.clear();
    out.reserve(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let a = target.get(i).copied();
        let b = source.get(j).copied();
        match (a, b) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = field.add(va, field.mul(m, vb));
                if v == 0 {
                    vanished.push(ca);
                } else {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((ca, va));
                i += 1;
            }
            (Some((ca, va)), None) => {
                out.push((ca, va));
                i += 1;
            }
            (_, Some((cb, vb))) => {
                let v = field.mul(m, vb);
                if v != 0 {
                    appeared.push(cb);
                    out.push((cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
}
