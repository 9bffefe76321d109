//! Small index sets packed into a `u128`.

use std::fmt;

/// A subset of `{0, …, 127}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexMask(pub u128);

pub const MAX_INDEX: usize = 128;

impl IndexMask {
    pub const EMPTY: IndexMask = IndexMask(0);

    pub fn singleton(i: usize) -> Self {
        IndexMask(1u128 << i)
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= MAX_INDEX {
            IndexMask(u128::MAX)
        } else {
            IndexMask((1u128 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INDEX && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    pub fn with(self, i: usize) -> Self {
        IndexMask(self.0 | 1u128 << i)
    }

    pub fn without(self, i: usize) -> Self {
        IndexMask(self.0 & !(1u128 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        IndexMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexMask(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Shift every index up by `k`.
    pub fn shifted(self, k: usize) -> Self {
        IndexMask(self.0 << k)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of elements of `self` strictly smaller than `i`.
    pub fn rank_of(self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            (self.0 & ((1u128 << i) - 1)).count_ones() as usize
        }
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> impl Iterator<Item = IndexMask> {
        let full = self.0;
        let mut cur: Option<u128> = Some(0);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == full { None } else { Some((c.wrapping_sub(full)) & full) };
            Some(IndexMask(c))
        })
    }

    /// All subsets of `self` with exactly `k` elements.
    pub fn subsets_of_size(self, k: usize) -> impl Iterator<Item = IndexMask> {
        self.subsets().filter(move |s| s.len() == k)
    }
}

impl FromIterator<usize> for IndexMask {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut m = IndexMask::EMPTY;
        for i in iter {
            m.insert(i);
        }
        m
    }
}

impl fmt::Debug for IndexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Sign of the permutation sorting the concatenation `a ++ b` of two disjoint
/// increasing sequences.
pub fn merge_sign(a: IndexMask, b: IndexMask) -> i64 {
    debug_assert!(a.is_disjoint(b));
    let inversions: usize = b.iter().map(|j| a.len() - a.rank_of(j)).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Compare two masks as sorted index lists, lexicographically.
pub fn lex_cmp(a: IndexMask, b: IndexMask) -> std::cmp::Ordering {
    a.to_vec().cmp(&b.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_powerset() {
        let m: IndexMask = [1, 3, 4].into_iter().collect();
        let subs: Vec<IndexMask> = m.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset(m)));
        assert_eq!(IndexMask::EMPTY.subsets().count(), 1);
        assert_eq!(m.subsets_of_size(2).count(), 3);
    }

    #[test]
    fn merge_signs() {
        let a: IndexMask = [0, 2].into_iter().collect();
        let b: IndexMask = [1].into_iter().collect();
        assert_eq!(merge_sign(a, b), -1);
        assert_eq!(merge_sign(b, a), -1);
        assert_eq!(merge_sign(IndexMask::singleton(0), IndexMask::singleton(1)), 1);
        assert_eq!(merge_sign(IndexMask::singleton(1), IndexMask::singleton(0)), -1);
    }

    #[test]
    fn rank_and_iteration() {
        let m: IndexMask = [0, 5, 9].into_iter().collect();
        assert_eq!(m.to_vec(), vec![0, 5, 9]);
        assert_eq!(m.rank_of(9), 2);
        assert_eq!(m.shifted(2).to_vec(), vec![2, 7, 11]);
        assert_eq!(IndexMask::full(3).to_vec(), vec![0, 1, 2]);
    }
}
