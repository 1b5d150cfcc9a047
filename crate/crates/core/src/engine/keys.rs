//! Birth and death orders on the indices of a zigzag.
//!
//! For indices `i < j`, `i ≤_b j` iff the arrow into `j` points forward, and
//! `i ≤_d j` iff the arrow out of `i` points forward. Both are total orders.

use std::cmp::Ordering;

/// Birth of a class: the arrow at which it appears, with that arrow's
/// orientation (`true` for an insertion).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BirthKey {
    pub arrow: usize,
    pub forward: bool,
}

impl BirthKey {
    pub fn new(arrow: usize, forward: bool) -> Self {
        BirthKey { arrow, forward }
    }
}

/// Compares births under `≤_b`.
pub fn compare_birth(a: BirthKey, b: BirthKey) -> Ordering {
    match a.arrow.cmp(&b.arrow) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less if b.forward => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Greater if a.forward => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
    }
}

/// An index together with the orientation of the arrow leaving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeathKey {
    pub index: usize,
    pub forward_out: bool,
}

/// Compares deaths under `≤_d`.
pub fn compare_death(a: DeathKey, b: DeathKey) -> Ordering {
    match a.index.cmp(&b.index) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less if a.forward_out => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Greater if b.forward_out => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Node `i` (1-based) of a quiver whose arrows are `forward[0..]`.
    fn births(forward: &[bool]) -> Vec<BirthKey> {
        (1..=forward.len() + 1)
            .map(|i| BirthKey::new(i, i == 1 || forward[i - 2]))
            .collect()
    }

    fn deaths(forward: &[bool]) -> Vec<DeathKey> {
        (1..=forward.len() + 1)
            .map(|i| DeathKey {
                index: i,
                forward_out: forward.get(i - 1).copied().unwrap_or(false),
            })
            .collect()
    }

    const QUIVER: [bool; 5] = [true, true, false, true, false];

    #[test]
    fn birth_order_example() {
        let mut keys = births(&QUIVER);
        keys.sort_by(|a, b| compare_birth(*a, *b));
        let order: Vec<usize> = keys.iter().map(|k| k.arrow).collect();
        assert_eq!(order, vec![6, 4, 1, 2, 3, 5]);
    }

    #[test]
    fn death_order_example() {
        let mut keys = deaths(&QUIVER);
        keys.sort_by(|a, b| compare_death(*a, *b));
        let order: Vec<usize> = keys.iter().map(|k| k.index).collect();
        assert_eq!(order, vec![1, 2, 4, 6, 5, 3]);
    }

    #[test]
    fn trivial_cases() {
        let k = BirthKey::new(3, false);
        assert_eq!(compare_birth(k, k), Ordering::Equal);
        let fwd = births(&[true; 6]);
        for w in fwd.windows(2) {
            assert_eq!(compare_birth(w[0], w[1]), Ordering::Less);
        }
        // Two consecutive removals: the later index is smaller.
        let a = DeathKey { index: 4, forward_out: false };
        let b = DeathKey { index: 5, forward_out: false };
        assert_eq!(compare_death(b, a), Ordering::Less);
    }

    proptest! {
        #[test]
        fn orders_are_total(forward in prop::collection::vec(any::<bool>(), 0..12)) {
            let b = births(&forward);
            let d = deaths(&forward);
            for x in 0..b.len() {
                for y in 0..b.len() {
                    prop_assert_eq!(compare_birth(b[x], b[y]), compare_birth(b[y], b[x]).reverse());
                    prop_assert_eq!(compare_death(d[x], d[y]), compare_death(d[y], d[x]).reverse());
                    for z in 0..b.len() {
                        if compare_birth(b[x], b[y]).is_le() && compare_birth(b[y], b[z]).is_le() {
                            prop_assert!(compare_birth(b[x], b[z]).is_le());
                        }
                        if compare_death(d[x], d[y]).is_le() && compare_death(d[y], d[z]).is_le() {
                            prop_assert!(compare_death(d[x], d[z]).is_le());
                        }
                    }
                }
            }
        }
    }
}
