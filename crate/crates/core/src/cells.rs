//! Occupied-cell sets for one level of a dyadic grid.
//!
//! A level is stored either as a sorted index list or as a packed bit grid.
//! The dense form is chosen once occupancy exceeds 1/64 of the level, which
//! is exactly where a bit grid becomes smaller than a `Vec<u64>` of indices.

use std::fmt;

/// Occupancy above `universe / DENSE_DIVISOR` switches to the bit grid.
pub const DENSE_DIVISOR: u64 = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct BitGrid {
    words: Vec<u64>,
    universe: u64,
}

impl BitGrid {
    pub fn new(universe: u64) -> Self {
        let n = universe.div_ceil(64) as usize;
        BitGrid {
            words: vec![0; n],
            universe,
        }
    }

    #[inline]
    pub fn universe(&self) -> u64 {
        self.universe
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        debug_assert!(i < self.universe);
        self.words[(i >> 6) as usize] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        i < self.universe && self.words[(i >> 6) as usize] & (1u64 << (i & 63)) != 0
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of set bits in `[lo, hi)`.
    pub fn count_range(&self, lo: u64, hi: u64) -> u64 {
        let hi = hi.min(self.universe);
        if lo >= hi {
            return 0;
        }
        let (lw, hw) = ((lo >> 6) as usize, ((hi - 1) >> 6) as usize);
        let lo_mask = !0u64 << (lo & 63);
        let hi_mask = !0u64 >> (63 - ((hi - 1) & 63));
        if lw == hw {
            return (self.words[lw] & lo_mask & hi_mask).count_ones() as u64;
        }
        let mut total = (self.words[lw] & lo_mask).count_ones() as u64;
        for w in &self.words[lw + 1..hw] {
            total += w.count_ones() as u64;
        }
        total + (self.words[hw] & hi_mask).count_ones() as u64
    }

    /// `self |= src << shift`, dropping bits that fall outside the universe.
    pub fn or_shifted(&mut self, src: &BitGrid, shift: u64) {
        let q = (shift >> 6) as usize;
        let r = (shift & 63) as u32;
        let n = self.words.len();
        if q >= n {
            return;
        }
        for (i, &w) in src.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let dst = i + q;
            if dst >= n {
                break;
            }
            self.words[dst] |= w << r;
            if r > 0 && dst + 1 < n {
                self.words[dst + 1] |= w >> (64 - r);
            }
        }
        self.trim();
    }

    pub fn or_assign(&mut self, other: &BitGrid) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let tail = self.universe & 63;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

impl fmt::Debug for BitGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitGrid({} of {})", self.count(), self.universe)
    }
}

pub struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for BitIter<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as u64;
                self.current &= self.current - 1;
                return Some(((self.word_idx as u64) << 6) + tz);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

#[derive(Clone)]
enum Repr {
    Sparse(Vec<u64>),
    Dense { bits: BitGrid, len: u64 },
}

/// The occupied cell indices of one level, over `[0, universe)`.
#[derive(Clone)]
pub struct CellSet {
    universe: u64,
    repr: Repr,
}

impl CellSet {
    pub fn empty(universe: u64) -> Self {
        CellSet {
            universe,
            repr: Repr::Sparse(Vec::new()),
        }
    }

    /// Builds from a strictly increasing index list.
    pub fn from_sorted(universe: u64, cells: Vec<u64>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(cells.last().is_none_or(|&c| c < universe));
        if is_dense(cells.len() as u64, universe) {
            let mut bits = BitGrid::new(universe);
            for &c in &cells {
                bits.set(c);
            }
            let len = cells.len() as u64;
            CellSet {
                universe,
                repr: Repr::Dense { bits, len },
            }
        } else {
            CellSet {
                universe,
                repr: Repr::Sparse(cells),
            }
        }
    }

    pub fn from_unsorted(universe: u64, mut cells: Vec<u64>) -> Self {
        cells.sort_unstable();
        cells.dedup();
        Self::from_sorted(universe, cells)
    }

    pub fn from_bits(bits: BitGrid) -> Self {
        let universe = bits.universe();
        let len = bits.count();
        if is_dense(len, universe) {
            CellSet {
                universe,
                repr: Repr::Dense { bits, len },
            }
        } else {
            CellSet {
                universe,
                repr: Repr::Sparse(bits.iter().collect()),
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn len(&self) -> u64 {
        match &self.repr {
            Repr::Sparse(v) => v.len() as u64,
            Repr::Dense { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    pub fn contains(&self, i: u64) -> bool {
        match &self.repr {
            Repr::Sparse(v) => v.binary_search(&i).is_ok(),
            Repr::Dense { bits, .. } => bits.get(i),
        }
    }

    /// Number of occupied cells in `[lo, hi)`.
    pub fn count_range(&self, lo: u64, hi: u64) -> u64 {
        match &self.repr {
            Repr::Sparse(v) => {
                let a = v.partition_point(|&c| c < lo);
                let b = v.partition_point(|&c| c < hi);
                b.saturating_sub(a) as u64
            }
            Repr::Dense { bits, .. } => bits.count_range(lo, hi),
        }
    }

    pub fn iter(&self) -> CellIter<'_> {
        match &self.repr {
            Repr::Sparse(v) => CellIter::Sparse(v.iter()),
            Repr::Dense { bits, .. } => CellIter::Dense(bits.iter()),
        }
    }

    pub fn first(&self) -> Option<u64> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<u64> {
        match &self.repr {
            Repr::Sparse(v) => v.last().copied(),
            Repr::Dense { bits, .. } => {
                let (i, w) = bits.words.iter().enumerate().rev().find(|(_, w)| **w != 0)?;
                Some(((i as u64) << 6) + 63 - w.leading_zeros() as u64)
            }
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// A bit-grid copy of this set.
    pub fn to_bits(&self) -> BitGrid {
        match &self.repr {
            Repr::Dense { bits, .. } => bits.clone(),
            Repr::Sparse(v) => {
                let mut bits = BitGrid::new(self.universe);
                for &c in v {
                    bits.set(c);
                }
                bits
            }
        }
    }

    /// Cells one level up: `{ i >> 1 }` over half the universe.
    pub fn parents(&self) -> CellSet {
        self.coarsen(1)
    }

    /// Cells `k` levels up: `{ i >> k }`.
    pub fn coarsen(&self, k: u32) -> CellSet {
        let universe = self.universe >> k;
        let mut out: Vec<u64> = Vec::new();
        for c in self.iter() {
            let p = c >> k;
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        CellSet::from_sorted(universe, out)
    }

    /// Maximal runs of consecutive cells as `(start, len)`.
    pub fn runs(&self) -> Vec<(u64, u64)> {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for c in self.iter() {
            match runs.last_mut() {
                Some((s, l)) if *s + *l == c => *l += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }
}

/// Start offsets, within `cells`, of each run sharing the ancestor
/// `c >> shift`, aligned with the order of `ancestors`.
///
/// Every cell must have its ancestor in `ancestors`.
pub fn group_offsets(ancestors: &CellSet, cells: &CellSet, shift: u32) -> Vec<usize> {
    let mut offs = Vec::with_capacity(ancestors.len() as usize + 1);
    let mut it = cells.iter().peekable();
    let mut pos = 0usize;
    for a in ancestors.iter() {
        offs.push(pos);
        while let Some(&c) = it.peek() {
            if c >> shift != a {
                break;
            }
            pos += 1;
            it.next();
        }
    }
    offs.push(pos);
    offs
}

fn is_dense(len: u64, universe: u64) -> bool {
    len > 0 && len.saturating_mul(DENSE_DIVISOR) > universe
}

impl PartialEq for CellSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self.len() == other.len()
            && self.iter().eq(other.iter())
    }
}

impl Eq for CellSet {}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 32 {
            f.debug_set().entries(self.iter()).finish()
        } else {
            write!(f, "CellSet({} of {})", self.len(), self.universe)
        }
    }
}

pub enum CellIter<'a> {
    Sparse(std::slice::Iter<'a, u64>),
    Dense(BitIter<'a>),
}

impl Iterator for CellIter<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        match self {
            CellIter::Sparse(it) => it.next().copied(),
            CellIter::Dense(it) => it.next(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn density_switch() {
        let sparse = CellSet::from_sorted(1 << 10, vec![1, 5, 9]);
        assert!(!sparse.is_dense());
        let dense = CellSet::from_sorted(64, vec![1, 5]);
        assert!(dense.is_dense());
        assert_eq!(dense.to_vec(), vec![1, 5]);
        assert_eq!(dense.last(), Some(5));
    }

    #[test]
    fn shifted_or_crosses_words() {
        let mut src = BitGrid::new(200);
        src.set(0);
        src.set(63);
        src.set(64);
        let mut dst = BitGrid::new(200);
        dst.or_shifted(&src, 70);
        assert_eq!(dst.iter().collect::<Vec<_>>(), vec![70, 133, 134]);
        // bits pushed past the universe are dropped
        let mut small = BitGrid::new(100);
        small.or_shifted(&src, 70);
        assert_eq!(small.iter().collect::<Vec<_>>(), vec![70]);
    }

    #[test]
    fn runs_and_coarsen() {
        let s = CellSet::from_sorted(16, vec![0, 1, 2, 5, 6, 7]);
        assert_eq!(s.runs(), vec![(0, 3), (5, 3)]);
        assert_eq!(s.parents().to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(s.coarsen(2).to_vec(), vec![0, 1]);
    }

    proptest! {
        #[test]
        fn count_range_matches_filter(
            cells in proptest::collection::btree_set(0u64..500, 0..300),
            lo in 0u64..520,
            len in 0u64..300,
        ) {
            let v: Vec<u64> = cells.into_iter().collect();
            let hi = lo + len;
            let expect = v.iter().filter(|&&c| c >= lo && c < hi).count() as u64;
            let set = CellSet::from_sorted(500, v.clone());
            prop_assert_eq!(set.count_range(lo, hi), expect);
            prop_assert_eq!(set.to_bits().count_range(lo, hi), expect);
            prop_assert_eq!(CellSet::from_bits(set.to_bits()), set);
        }
    }
}
