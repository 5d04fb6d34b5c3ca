use core::fmt;
use core::ops::{BitAnd, BitOr, BitOrAssign, Sub};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// Largest vertex count a [`VertexSet`] can address.
pub const MAX_VERTICES: usize = 128;

/// Bitmask set of vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    /// `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: VertexId) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u128 << v)
    }

    #[inline]
    pub fn contains(self, v: VertexId) -> bool {
        v < MAX_VERTICES && self.0 & (1u128 << v) != 0
    }

    #[inline]
    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u128 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1u128 << v);
    }

    #[inline]
    #[must_use]
    pub fn with(self, v: VertexId) -> Self {
        VertexSet(self.0 | (1u128 << v))
    }

    #[inline]
    #[must_use]
    pub fn without(self, v: VertexId) -> Self {
        VertexSet(self.0 & !(1u128 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<VertexId> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Largest member plus one, or 0 for the empty set.
    #[inline]
    pub fn bound(self) -> usize {
        128 - self.0.leading_zeros() as usize
    }

    /// Members in ascending order.
    #[inline]
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, in increasing bit-pattern order (starting at ∅).
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }

    /// Subsets of size `k`, in lexicographic order of their sorted members.
    pub fn subsets_of_size(self, k: usize) -> Combinations {
        let members: alloc::vec::Vec<VertexId> = self.iter().collect();
        Combinations::new(members, k)
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: VertexSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = VertexId;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = VertexId;
    #[inline]
    fn next(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl DoubleEndedIterator for Iter {
    #[inline]
    fn next_back(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let v = 127 - self.0.leading_zeros() as usize;
        self.0 &= !(1u128 << v);
        Some(v)
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    universe: u128,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        // standard submask successor: (cur - universe) & universe
        let succ = cur.wrapping_sub(self.universe) & self.universe;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(VertexSet(cur))
    }
}

/// k-combinations of a sorted member list, lexicographic.
pub struct Combinations {
    members: alloc::vec::Vec<VertexId>,
    idx: alloc::vec::Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(members: alloc::vec::Vec<VertexId>, k: usize) -> Self {
        let done = k > members.len();
        Combinations {
            idx: (0..k).collect(),
            members,
            done,
        }
    }
}

impl Iterator for Combinations {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        if self.done {
            return None;
        }
        let out: VertexSet = self.idx.iter().map(|&i| self.members[i]).collect();
        let k = self.idx.len();
        let m = self.members.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn subsets_cover_powerset() {
        let s: VertexSet = [1, 4, 6].into_iter().collect();
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], VertexSet::EMPTY);
        assert!(all.iter().all(|x| x.is_subset(s)));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let s: VertexSet = [0, 2, 3, 5].into_iter().collect();
        let c: Vec<Vec<usize>> = s.subsets_of_size(2).map(|x| x.iter().collect()).collect();
        assert_eq!(
            c,
            alloc::vec![
                alloc::vec![0, 2],
                alloc::vec![0, 3],
                alloc::vec![0, 5],
                alloc::vec![2, 3],
                alloc::vec![2, 5],
                alloc::vec![3, 5]
            ]
        );
        assert_eq!(s.subsets_of_size(0).count(), 1);
        assert_eq!(s.subsets_of_size(5).count(), 0);
    }

    #[test]
    fn full_and_bounds() {
        assert_eq!(VertexSet::full(128).len(), 128);
        assert_eq!(VertexSet::full(5).bound(), 5);
        assert_eq!(VertexSet::EMPTY.bound(), 0);
        assert_eq!(VertexSet::singleton(127).first(), Some(127));
    }
}
