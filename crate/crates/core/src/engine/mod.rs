//! Zigzag persistent cohomology.
//!
//! The engine keeps one cochain row per simplex of the current complex
//! `K`. Every simplex also has an entry in the *suffix*, the order in which
//! `K` would be dismantled by removals if the input stopped here; the front
//! is removed first. Each row's pivot is its support column removed last,
//! and pivots are distinct, so the matrix is triangular in suffix order.
//!
//! Rows are of three kinds. `F` rows are cocycles representing classes born
//! in the past (they carry a birth key); a class dies when its pivot is
//! removed. `G` rows are not cocycles: `δg = h` for a paired `H` row. A `G`
//! row represents a class that would be born when its partner's pivot is
//! removed and die at its own pivot.
//!
//! Insertions are handled by reduction on the rows that see the new simplex
//! through their coboundary. Removals first hoist the removed simplex to the
//! suffix front by adjacent transpositions, then retire or promote the row
//! pivoted there.

mod audit;
pub mod keys;
mod order_list;
mod row;

use std::collections::HashMap;

use log::trace;
use thiserror::Error;

use crate::diagram::{Interval, PersistenceDiagram};
use crate::field::Field;
use crate::filtration::{ArrowOp, Direction, ZigzagFiltration};
use crate::simplicial::{ComplexError, Simplex, SimplexId, SimplicialComplex};

pub use audit::AuditViolation;
pub use keys::{compare_birth, compare_death, BirthKey, DeathKey};
pub use order_list::OrderList;
pub use row::{RowId, RowKind};

use row::{axpy, Row};

const NO_ROW: RowId = RowId::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("cannot transpose: {face} is a face of {coface}, which is removed first")]
    ForbiddenTransposition { face: Simplex, coface: Simplex },
    #[error("suffix position {pos} has no successor (suffix length {len})")]
    InvalidPosition { pos: usize, len: usize },
    #[error("audit failed after arrow {arrow}: {violation}")]
    Audit { arrow: usize, violation: AuditViolation },
}

/// Result of an insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionOutcome {
    /// A new class was born, represented by `row`.
    Born { row: RowId },
    /// A class died. `leftover` is the row that became a `G` row.
    Killed { interval: Interval, leftover: RowId },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub arrows: usize,
    pub max_complex_size: usize,
    pub peak_rows: usize,
    pub peak_nonzeros: usize,
    /// Transpositions that required row arithmetic.
    pub transpositions: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineOptions {
    /// Run [`ZigzagEngine::audit`] after every arrow.
    pub audit: bool,
}

impl EngineOptions {
    /// Reads `ZZ_DEBUG_AUDIT=1` from the environment.
    pub fn from_env() -> Self {
        EngineOptions {
            audit: std::env::var("ZZ_DEBUG_AUDIT").is_ok_and(|v| v == "1"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZigzagEngine {
    field: Field,
    complex: SimplicialComplex,
    rows: Vec<Option<Row>>,
    free_rows: Vec<RowId>,
    live_rows: usize,
    /// Rows with a nonzero entry in each column.
    col_rows: Vec<Vec<RowId>>,
    pivot_row: Vec<RowId>,
    suffix: OrderList,
    nonzeros: usize,
    arrow: usize,
    stats: EngineStats,
    scratch: Vec<(SimplexId, u32)>,
    appeared: Vec<SimplexId>,
    vanished: Vec<SimplexId>,
}

impl ZigzagEngine {
    pub fn new(field: Field) -> Self {
        ZigzagEngine {
            field,
            complex: SimplicialComplex::new(),
            rows: Vec::new(),
            free_rows: Vec::new(),
            live_rows: 0,
            col_rows: Vec::new(),
            pivot_row: Vec::new(),
            suffix: OrderList::new(),
            nonzeros: 0,
            arrow: 0,
            stats: EngineStats::default(),
            scratch: Vec::new(),
            appeared: Vec::new(),
            vanished: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Number of arrows processed so far.
    pub fn arrow(&self) -> usize {
        self.arrow
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn row_count(&self) -> usize {
        self.live_rows
    }

    /// Pending removal order, front first.
    pub fn suffix(&self) -> Vec<Simplex> {
        self.suffix.iter().map(|c| self.complex.simplex(c).clone()).collect()
    }

    pub fn row_kind(&self, row: RowId) -> Option<RowKind> {
        self.rows.get(row as usize)?.as_ref().map(|r| r.kind)
    }

    pub fn row_birth(&self, row: RowId) -> Option<BirthKey> {
        self.rows.get(row as usize)?.as_ref()?.birth
    }

    /// Rough heap footprint of the engine state.
    pub fn approx_bytes(&self) -> usize {
        let entry = std::mem::size_of::<(SimplexId, u32)>();
        self.nonzeros * (entry + 4)
            + self.rows.capacity() * std::mem::size_of::<Option<Row>>()
            + self.col_rows.capacity() * std::mem::size_of::<Vec<RowId>>()
            + self.pivot_row.capacity() * 4
            + self.suffix.approx_bytes()
            + self.complex.len() * 96
    }

    fn row(&self, id: RowId) -> &Row {
        self.rows[id as usize].as_ref().expect("live row")
    }

    fn row_mut(&mut self, id: RowId) -> &mut Row {
        self.rows[id as usize].as_mut().expect("live row")
    }

    fn grow_columns(&mut self) {
        let n = self.complex.id_bound();
        if self.col_rows.len() < n {
            self.col_rows.resize_with(n, Vec::new);
            self.pivot_row.resize(n, NO_ROW);
        }
    }

    fn index_add(&mut self, col: SimplexId, row: RowId) {
        self.col_rows[col as usize].push(row);
        self.nonzeros += 1;
    }

    fn index_remove(&mut self, col: SimplexId, row: RowId) {
        let list = &mut self.col_rows[col as usize];
        let pos = list.iter().position(|&r| r == row).expect("indexed entry");
        list.swap_remove(pos);
        self.nonzeros -= 1;
    }

    fn alloc_row(&mut self, row: Row) -> RowId {
        let id = match self.free_rows.pop() {
            Some(id) => id,
            None => {
                self.rows.push(None);
                (self.rows.len() - 1) as RowId
            }
        };
        for &(c, _) in &row.entries {
            self.index_add(c, id);
        }
        self.pivot_row[row.pivot as usize] = id;
        self.rows[id as usize] = Some(row);
        self.live_rows += 1;
        self.stats.peak_rows = self.stats.peak_rows.max(self.live_rows);
        id
    }

    fn free_row(&mut self, id: RowId) -> Row {
        let row = self.rows[id as usize].take().expect("live row");
        for &(c, _) in &row.entries {
            self.index_remove(c, id);
        }
        if self.pivot_row[row.pivot as usize] == id {
            self.pivot_row[row.pivot as usize] = NO_ROW;
        }
        self.free_rows.push(id);
        self.live_rows -= 1;
        row
    }

    /// `target += m * source`. Pivots are left to the caller.
    fn add_scaled(&mut self, target: RowId, m: u32, source: RowId) {
        debug_assert_ne!(target, source);
        if m == 0 {
            return;
        }
        let old = std::mem::take(&mut self.row_mut(target).entries);
        let mut out = std::mem::take(&mut self.scratch);
        let mut appeared = std::mem::take(&mut self.appeared);
        let mut vanished = std::mem::take(&mut self.vanished);
        appeared.clear();
        vanished.clear();
        axpy(
            self.field,
            &old,
            m,
            &self.row(source).entries,
            &mut out,
            &mut appeared,
            &mut vanished,
        );
        self.appeared = appeared;
        self.vanished = vanished;
        self.row_mut(target).entries = out;
        self.scratch = old;
        for i in 0..self.appeared.len() {
            let c = self.appeared[i];
            self.index_add(c, target);
        }
        for i in 0..self.vanished.len() {
            let c = self.vanished[i];
            self.index_remove(c, target);
        }
        self.stats.peak_nonzeros = self.stats.peak_nonzeros.max(self.nonzeros);
    }

    fn set_entry(&mut self, row: RowId, col: SimplexId, value: u32) {
        let had = self.row(row).get(col) != 0;
        self.row_mut(row).set(col, value);
        match (had, value != 0) {
            (false, true) => self.index_add(col, row),
            (true, false) => self.index_remove(col, row),
            _ => {}
        }
    }

    /// Applies one arrow; returns the interval it closes, if any.
    pub fn apply(&mut self, op: &ArrowOp) -> Result<Option<Interval>, EngineError> {
        match op.direction {
            Direction::Insert => Ok(match self.insert(&op.simplex)? {
                ReflectionOutcome::Born { .. } => None,
                ReflectionOutcome::Killed { interval, .. } => Some(interval),
            }),
            Direction::Delete => self.remove(&op.simplex),
        }
    }

    /// Forward arrow adding `sigma`.
    pub fn insert(&mut self, sigma: &Simplex) -> Result<ReflectionOutcome, EngineError> {
        let id = self.complex.insert(sigma.clone())?;
        self.grow_columns();
        self.arrow += 1;
        self.stats.arrows = self.arrow;
        self.stats.max_complex_size = self.stats.max_complex_size.max(self.complex.len());
        let t = self.arrow;
        let f = self.field;
        let dim = sigma.dim();

        // c_r = α_r(∂σ) for every row touching a facet.
        let mut coeff: HashMap<RowId, u32> = HashMap::new();
        for (k, &facet) in self.complex.facet_ids(id).iter().enumerate() {
            let sign = f.sign(k);
            for &r in &self.col_rows[facet as usize] {
                let v = f.mul(sign, self.row(r).get(facet));
                let e = coeff.entry(r).or_insert(0);
                *e = f.add(*e, v);
            }
        }
        let mut cands: Vec<(RowId, u32)> = Vec::new();
        for (r, c) in coeff {
            if c == 0 {
                continue;
            }
            match self.row(r).kind {
                RowKind::F => cands.push((r, c)),
                // Keeps δg = h on the enlarged complex.
                RowKind::G(h) => self.set_entry(h, id, c),
                RowKind::H(_) => panic!("H row {r} is not a cocycle"),
            }
        }
        self.suffix.push_front(id);

        if cands.is_empty() {
            let row = self.alloc_row(Row {
                entries: vec![(id, 1)],
                dim,
                kind: RowKind::F,
                birth: Some(BirthKey::new(t, true)),
                pivot: id,
            });
            trace!("arrow {t}: insert {sigma} born");
            return Ok(ReflectionOutcome::Born { row });
        }

        // Latest pivot first; the last row becomes the G row.
        cands.sort_by(|a, b| {
            self.suffix
                .cmp(self.row(b.0).pivot, self.row(a.0).pivot)
        });
        let births: Vec<BirthKey> = cands
            .iter()
            .map(|&(r, _)| self.row(r).birth.expect("F rows carry births"))
            .collect();
        let last = cands.len() - 1;
        let argmax = |range: std::ops::RangeInclusive<usize>| {
            range
                .max_by(|&x, &y| compare_birth(births[x], births[y]))
                .expect("nonempty range")
        };
        let youngest = argmax(0..=last);
        let interval = Interval::finite(dim - 1, births[youngest].arrow, t);

        // Births not yet handed to a surviving row.
        let mut pool: Vec<usize> = (0..=last).filter(|&i| i != youngest).collect();
        for j in 0..last {
            let (rj, cj) = cands[j];
            if let Some(pos) = pool.iter().position(|&i| i == j) {
                pool.swap_remove(pos);
                let k = argmax(j + 1..=last);
                assert!(
                    compare_birth(births[k], births[j]).is_ge(),
                    "arrow {t}: no older row to reduce row {rj} with"
                );
                let (rk, ck) = cands[k];
                let m = f.neg(f.div(cj, ck).expect("nonzero coefficient"));
                self.add_scaled(rj, m, rk);
            } else {
                let pos = (0..pool.len())
                    .max_by(|&x, &y| compare_birth(births[pool[x]], births[pool[y]]))
                    .expect("a birth is left for every surviving row");
                let l = pool.swap_remove(pos);
                assert!(l > j, "arrow {t}: reassigned birth from a later-pivot row");
                assert!(
                    compare_birth(births[l], births[j]).is_le(),
                    "arrow {t}: reassigned birth is younger than the one it replaces"
                );
                let (rl, cl) = cands[l];
                let m = f.neg(f.div(cj, cl).expect("nonzero coefficient"));
                self.add_scaled(rj, m, rl);
                self.row_mut(rj).birth = Some(births[l]);
            }
        }
        debug_assert!(pool.is_empty());

        let (rp, cp) = cands[last];
        let h = self.alloc_row(Row {
            entries: vec![(id, cp)],
            dim,
            kind: RowKind::H(rp),
            birth: None,
            pivot: id,
        });
        let g = self.row_mut(rp);
        g.kind = RowKind::G(h);
        g.birth = None;
        trace!("arrow {t}: insert {sigma} kills {interval}");
        Ok(ReflectionOutcome::Killed {
            interval,
            leftover: rp,
        })
    }

    /// Backward arrow removing the maximal simplex `sigma`.
    pub fn remove(&mut self, sigma: &Simplex) -> Result<Option<Interval>, EngineError> {
        let id = self
            .complex
            .id_of(sigma)
            .ok_or_else(|| ComplexError::Absent(sigma.clone()))?;
        if let Some(&c) = self.complex.cofacet_ids(id).first() {
            return Err(ComplexError::HasCoface {
                simplex: sigma.clone(),
                coface: self.complex.simplex(c).clone(),
            }
            .into());
        }
        self.arrow += 1;
        self.stats.arrows = self.arrow;
        let t = self.arrow;
        self.hoist_to_front(id);

        let r = self.pivot_row[id as usize];
        debug_assert_eq!(self.row(r).entries.len(), 1);
        let emitted = match self.row(r).kind {
            RowKind::F => {
                let row = self.free_row(r);
                let birth = row.birth.expect("F rows carry births");
                Some(Interval::finite(row.dim, birth.arrow, t))
            }
            RowKind::H(g) => {
                self.free_row(r);
                let g = self.row_mut(g);
                g.kind = RowKind::F;
                g.birth = Some(BirthKey::new(t, false));
                None
            }
            RowKind::G(_) => panic!("G row {r} pivoted at the suffix front"),
        };
        for r in std::mem::take(&mut self.col_rows[id as usize]) {
            self.row_mut(r).set(id, 0);
            self.nonzeros -= 1;
        }
        self.pivot_row[id as usize] = NO_ROW;
        self.suffix.remove(id);
        self.complex.remove(sigma)?;
        match emitted {
            Some(iv) => trace!("arrow {t}: remove {sigma} kills {iv}"),
            None => trace!("arrow {t}: remove {sigma} born"),
        }
        Ok(emitted)
    }

    /// Moves the maximal simplex `id` to the suffix front. Entries its pivot
    /// row does not touch are skipped over directly (those transpositions
    /// are plain swaps); at each touched entry a real transposition runs.
    fn hoist_to_front(&mut self, id: SimplexId) {
        loop {
            let rb = self.pivot_row[id as usize];
            let blocker = self
                .row(rb)
                .entries
                .iter()
                .map(|e| e.0)
                .filter(|&c| c != id)
                .max_by(|&a, &b| self.suffix.cmp(a, b));
            match blocker {
                None => {
                    if self.suffix.front() != Some(id) {
                        self.suffix.move_to_front(id);
                    }
                    return;
                }
                Some(tau) => {
                    if self.suffix.next(tau) != Some(id) {
                        self.suffix.move_after(id, tau);
                    }
                    self.transpose(tau, id);
                }
            }
        }
    }

    /// Swaps the adjacent suffix entries at positions `pos` and `pos + 1`.
    pub fn transpose_adjacent(&mut self, pos: usize) -> Result<(), EngineError> {
        let len = self.suffix.len();
        let tau = self
            .suffix
            .iter()
            .nth(pos)
            .ok_or(EngineError::InvalidPosition { pos, len })?;
        let sigma = self
            .suffix
            .next(tau)
            .ok_or(EngineError::InvalidPosition { pos, len })?;
        let (ts, ss) = (self.complex.simplex(tau), self.complex.simplex(sigma));
        if ss.is_face_of(ts) {
            return Err(EngineError::ForbiddenTransposition {
                face: ss.clone(),
                coface: ts.clone(),
            });
        }
        self.transpose(tau, sigma);
        Ok(())
    }

    /// `tau` sits right before `sigma` in the suffix; afterwards `sigma`
    /// comes first. Only the two pivot rows can be affected, and only when
    /// the row pivoted at `sigma` has a nonzero at `tau`.
    fn transpose(&mut self, tau: SimplexId, sigma: SimplexId) {
        let rb = self.pivot_row[sigma as usize];
        let ra = self.pivot_row[tau as usize];
        let coef = self.row(rb).get(tau);
        self.suffix.swap_with_next(tau);
        if coef == 0 {
            return;
        }
        self.stats.transpositions += 1;
        let f = self.field;
        let a_tau = self.row(ra).get(tau);
        // Kill `tau` in rb using ra (pivots stay), or kill it in ra using rb
        // (pivots swap).
        let into_b = f.neg(f.div(coef, a_tau).expect("pivot entry is nonzero"));
        let into_a = f.neg(f.div(a_tau, coef).expect("nonzero"));
        let before = |e: &Self, x: RowId, y: RowId| {
            e.suffix.cmp(e.row(x).pivot, e.row(y).pivot).is_lt()
        };
        let swap = match (self.row(ra).kind, self.row(rb).kind) {
            (RowKind::H(ga), RowKind::H(gb)) => {
                if before(self, ga, gb) {
                    self.add_scaled(rb, into_b, ra);
                    self.add_scaled(gb, into_b, ga);
                    false
                } else {
                    self.add_scaled(ra, into_a, rb);
                    self.add_scaled(ga, into_a, gb);
                    true
                }
            }
            (RowKind::H(_), _) => {
                self.add_scaled(rb, into_b, ra);
                false
            }
            (_, RowKind::H(_)) => {
                self.add_scaled(ra, into_a, rb);
                true
            }
            (ka, kb) => {
                let a_first = match (ka, kb) {
                    (RowKind::F, RowKind::G(_)) => true,
                    (RowKind::G(_), RowKind::F) => false,
                    (RowKind::F, RowKind::F) => {
                        let (ba, bb) = (self.row(ra).birth, self.row(rb).birth);
                        compare_birth(ba.expect("birth"), bb.expect("birth")).is_ge()
                    }
                    (RowKind::G(ha), RowKind::G(hb)) => before(self, ha, hb),
                    _ => unreachable!(),
                };
                if a_first {
                    self.add_scaled(rb, into_b, ra);
                    if let (RowKind::G(ha), RowKind::G(hb)) = (ka, kb) {
                        self.add_scaled(hb, into_b, ha);
                    }
                    false
                } else {
                    self.add_scaled(ra, into_a, rb);
                    if let (RowKind::G(ha), RowKind::G(hb)) = (ka, kb) {
                        self.add_scaled(ha, into_a, hb);
                    }
                    true
                }
            }
        };
        if swap {
            self.row_mut(ra).pivot = sigma;
            self.row_mut(rb).pivot = tau;
            self.pivot_row[sigma as usize] = ra;
            self.pivot_row[tau as usize] = rb;
        }
    }

    /// Intervals of the classes still alive, consuming the engine.
    pub fn finish(self) -> Vec<Interval> {
        self.rows
            .iter()
            .flatten()
            .filter_map(|r| r.birth.map(|b| Interval::infinite(r.dim, b.arrow)))
            .collect()
    }

    /// Checks every structural invariant; see [`AuditViolation`].
    pub fn audit(&self) -> Result<(), AuditViolation> {
        audit::audit(self)
    }
}

/// Persistence diagram of `fil` over `field`.
pub fn compute_diagram(fil: &ZigzagFiltration, field: Field) -> Result<PersistenceDiagram, EngineError> {
    compute_diagram_with(fil, field, EngineOptions::default()).map(|(d, _)| d)
}

pub fn compute_diagram_with(
    fil: &ZigzagFiltration,
    field: Field,
    options: EngineOptions,
) -> Result<(PersistenceDiagram, EngineStats), EngineError> {
    let mut engine = ZigzagEngine::new(field);
    let mut intervals = Vec::new();
    for op in fil.ops() {
        if let Some(iv) = engine.apply(op)? {
            intervals.push(iv);
        }
        if options.audit {
            engine.audit().map_err(|violation| EngineError::Audit {
                arrow: engine.arrow(),
                violation,
            })?;
        }
    }
    let stats = engine.stats();
    intervals.extend(engine.finish());
    Ok((PersistenceDiagram::new(intervals), stats))
}

#[cfg(test)]
mod tests;
