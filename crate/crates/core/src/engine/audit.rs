use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::row::{Row, RowId, RowKind};
use super::{ZigzagEngine, NO_ROW};
use crate::simplicial::SimplexId;

/// First invariant violation found by [`ZigzagEngine::audit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditViolation {
    pub row: Option<RowId>,
    pub message: String,
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(r) => write!(f, "row {r}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for AuditViolation {}

fn fail<T>(row: Option<RowId>, message: impl Into<String>) -> Result<T, AuditViolation> {
    Err(AuditViolation {
        row,
        message: message.into(),
    })
}

/// Dense rank check only below this many simplices.
const DENSE_LIMIT: usize = 12;

fn coboundary(e: &ZigzagEngine, row: &Row) -> BTreeMap<SimplexId, u32> {
    let f = e.field;
    let mut out = BTreeMap::new();
    for &(c, v) in &row.entries {
        for &co in e.complex.cofacet_ids(c) {
            let k = e
                .complex
                .facet_ids(co)
                .iter()
                .position(|&x| x == c)
                .expect("facet link");
            let acc = out.entry(co).or_insert(0);
            *acc = f.add(*acc, f.mul(f.sign(k), v));
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

pub(super) fn audit(e: &ZigzagEngine) -> Result<(), AuditViolation> {
    let m = e.complex.len();
    if e.live_rows != m || e.suffix.len() != m {
        return fail(
            None,
            format!("{} rows, {} suffix entries, {m} simplices", e.live_rows, e.suffix.len()),
        );
    }
    let mut births = HashSet::new();
    let mut nonzeros = 0;
    for (id, row) in e.rows.iter().enumerate() {
        let Some(row) = row else { continue };
        let id = id as RowId;
        nonzeros += row.entries.len();
        if row.entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return fail(Some(id), "entries not sorted");
        }
        for &(c, v) in &row.entries {
            if v == 0 || v >= e.field.modulus() {
                return fail(Some(id), format!("bad coefficient {v}"));
            }
            if !e.suffix.contains(c) {
                return fail(Some(id), format!("column {c} is not in the complex"));
            }
            if e.complex.dim_of(c) != row.dim {
                return fail(Some(id), "support is not homogeneous");
            }
            if !e.col_rows[c as usize].contains(&id) {
                return fail(Some(id), format!("column {c} index is missing the row"));
            }
        }
        let latest = row
            .entries
            .iter()
            .map(|x| x.0)
            .max_by(|&a, &b| e.suffix.cmp(a, b));
        if latest != Some(row.pivot) {
            return fail(Some(id), "pivot is not the latest support column");
        }
        if e.pivot_row[row.pivot as usize] != id {
            return fail(Some(id), "pivot table disagrees");
        }
        let delta = coboundary(e, row);
        match row.kind {
            RowKind::F | RowKind::H(_) if !delta.is_empty() => {
                let name = if row.kind == RowKind::F { "δα_f ≠ 0" } else { "δα_h ≠ 0" };
                return fail(Some(id), name);
            }
            RowKind::G(h) => {
                let partner = e.rows.get(h as usize).and_then(Option::as_ref);
                let Some(partner) = partner.filter(|p| p.kind == RowKind::H(id)) else {
                    return fail(Some(id), "G/H pairing is broken");
                };
                let expected: BTreeMap<SimplexId, u32> = partner.entries.iter().copied().collect();
                if delta != expected {
                    return fail(Some(id), "δα_g ≠ α_h");
                }
            }
            RowKind::H(g) => {
                let ok = e
                    .rows
                    .get(g as usize)
                    .and_then(Option::as_ref)
                    .is_some_and(|p| p.kind == RowKind::G(id));
                if !ok {
                    return fail(Some(id), "G/H pairing is broken");
                }
            }
            RowKind::F => {}
        }
        match (row.kind, row.birth) {
            (RowKind::F, Some(b)) => {
                if !births.insert(b.arrow) {
                    return fail(Some(id), format!("duplicate birth {}", b.arrow));
                }
                if b.arrow > e.arrow {
                    return fail(Some(id), "birth in the future");
                }
            }
            (RowKind::F, None) => return fail(Some(id), "F row without birth"),
            (_, Some(_)) => return fail(Some(id), "G or H row with a birth"),
            _ => {}
        }
    }
    if nonzeros != e.nonzeros {
        return fail(None, "nonzero count drifted");
    }
    for c in e.suffix.iter() {
        let r = e.pivot_row[c as usize];
        if r == NO_ROW {
            return fail(None, format!("column {c} has no pivot row"));
        }
        if e.col_rows[c as usize].len() != e.rows.iter().flatten().filter(|r| r.get(c) != 0).count() {
            return fail(None, format!("column {c} index has stale rows"));
        }
    }
    if m <= DENSE_LIMIT {
        let cols: Vec<SimplexId> = e.suffix.iter().collect();
        let dense: Vec<Vec<u32>> = e
            .rows
            .iter()
            .flatten()
            .map(|r| cols.iter().map(|&c| r.get(c)).collect())
            .collect();
        let rank = crate::oracle::dense::rank(e.field, &dense);
        if rank != m {
            return fail(None, format!("matrix has rank {rank}, expected {m}"));
        }
    }
    Ok(())
}
