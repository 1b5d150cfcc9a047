//! Order-maintenance list over small integer ids: O(1) order queries,
//! amortized cheap insertion anywhere by integer labels with gap
//! renumbering.

use std::cmp::Ordering;

const NIL: u32 = u32::MAX;
const SPACING: u64 = 1 << 24;
const BASE: u64 = 1 << 62;

#[derive(Debug, Clone, Default)]
pub struct OrderList {
    label: Vec<u64>,
    prev: Vec<u32>,
    next: Vec<u32>,
    present: Vec<bool>,
    head: Option<u32>,
    tail: Option<u32>,
    len: usize,
    relabels: usize,
}

impl OrderList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: u32) -> bool {
        self.present.get(id as usize).copied().unwrap_or(false)
    }

    pub fn front(&self) -> Option<u32> {
        self.head
    }

    pub fn next(&self, id: u32) -> Option<u32> {
        debug_assert!(self.contains(id));
        Some(self.next[id as usize]).filter(|&n| n != NIL)
    }

    pub fn prev(&self, id: u32) -> Option<u32> {
        debug_assert!(self.contains(id));
        Some(self.prev[id as usize]).filter(|&p| p != NIL)
    }

    /// Order of `a` and `b` in the list (front is least).
    pub fn cmp(&self, a: u32, b: u32) -> Ordering {
        debug_assert!(self.contains(a) && self.contains(b));
        self.label[a as usize].cmp(&self.label[b as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::successors(self.head, move |&id| self.next(id))
    }

    /// Number of full renumberings so far.
    pub fn relabels(&self) -> usize {
        self.relabels
    }

    fn ensure(&mut self, id: u32) {
        let need = id as usize + 1;
        if self.label.len() < need {
            self.label.resize(need, 0);
            self.prev.resize(need, NIL);
            self.next.resize(need, NIL);
            self.present.resize(need, false);
        }
        assert!(!self.present[id as usize], "id {id} already in the list");
    }

    fn relabel(&mut self) {
        self.relabels += 1;
        let ids: Vec<u32> = self.iter().collect();
        let start = BASE - (ids.len() as u64 / 2) * SPACING;
        for (i, id) in ids.into_iter().enumerate() {
            self.label[id as usize] = start + i as u64 * SPACING;
        }
    }

    fn link(&mut self, id: u32, prev: Option<u32>, next: Option<u32>) {
        let i = id as usize;
        self.prev[i] = prev.unwrap_or(NIL);
        self.next[i] = next.unwrap_or(NIL);
        match prev {
            Some(p) => self.next[p as usize] = id,
            None => self.head = Some(id),
        }
        match next {
            Some(n) => self.prev[n as usize] = id,
            None => self.tail = Some(id),
        }
        self.present[i] = true;
        self.len += 1;
    }

    /// Inserts `id` between `prev` and `next`, which must be adjacent.
    fn insert_between(&mut self, id: u32, prev: Option<u32>, next: Option<u32>) {
        self.ensure(id);
        loop {
            let lo = prev.map(|p| self.label[p as usize]);
            let hi = next.map(|n| self.label[n as usize]);
            let label = match (lo, hi) {
                (None, None) => Some(BASE),
                (Some(l), None) => l.checked_add(SPACING),
                (None, Some(h)) => h.checked_sub(SPACING),
                (Some(l), Some(h)) => (h - l >= 2).then(|| l + (h - l) / 2),
            };
            if let Some(label) = label {
                self.label[id as usize] = label;
                break;
            }
            self.relabel();
        }
        self.link(id, prev, next);
    }

    pub fn push_front(&mut self, id: u32) {
        self.insert_between(id, None, self.head);
    }

    pub fn push_back(&mut self, id: u32) {
        self.insert_between(id, self.tail, None);
    }

    pub fn insert_after(&mut self, anchor: u32, id: u32) {
        let next = self.next(anchor);
        self.insert_between(id, Some(anchor), next);
    }

    pub fn insert_before(&mut self, anchor: u32, id: u32) {
        let prev = self.prev(anchor);
        self.insert_between(id, prev, Some(anchor));
    }

    pub fn remove(&mut self, id: u32) {
        assert!(self.contains(id), "id {id} not in the list");
        let i = id as usize;
        let (p, n) = (self.prev[i], self.next[i]);
        if p == NIL {
            self.head = Some(n).filter(|&n| n != NIL);
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.tail = Some(p).filter(|&p| p != NIL);
        } else {
            self.prev[n as usize] = p;
        }
        self.prev[i] = NIL;
        self.next[i] = NIL;
        self.present[i] = false;
        self.len -= 1;
    }

    /// Swaps `a` with its successor `b`.
    pub fn swap_with_next(&mut self, a: u32) {
        let b = self.next(a).expect("element has a successor");
        self.remove(b);
        self.insert_before(a, b);
    }

    /// Moves `id` to sit right after `anchor`.
    pub fn move_after(&mut self, id: u32, anchor: u32) {
        self.remove(id);
        self.insert_after(anchor, id);
    }

    pub fn move_to_front(&mut self, id: u32) {
        self.remove(id);
        self.push_front(id);
    }

    pub fn approx_bytes(&self) -> usize {
        self.label.capacity() * 8 + (self.prev.capacity() + self.next.capacity()) * 4 + self.present.capacity()
    }
}
