//! Fixed-width bitsets and bit matrices.
//!
//! Every carrier in this crate is an integer interval `0..n`, so subsets are
//! dense bitsets and binary relations are row-major bit matrices. The total
//! order on [`BitSet`] is the lectic order with bit 0 most significant, which
//! is the canonical element order used by the stable-set enumeration.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const WORD_BITS: usize = 64;

/// A subset of `0..width` backed by `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    width: usize,
    words: Vec<u64>,
}

fn words_for(width: usize) -> usize {
    width.div_ceil(WORD_BITS)
}

impl BitSet {
    pub fn empty(width: usize) -> Self {
        BitSet {
            width,
            words: vec![0; words_for(width)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = BitSet {
            width,
            words: vec![!0u64; words_for(width)],
        };
        s.mask_tail();
        s
    }

    pub fn singleton(width: usize, element: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(element);
        s
    }

    pub fn from_elements(width: usize, elements: &[usize]) -> Self {
        let mut s = Self::empty(width);
        for &e in elements {
            s.insert(e);
        }
        s
    }

    /// Clears any bits at or above `width` in the last word.
    fn mask_tail(&mut self) {
        let rem = self.width % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, element: usize) {
        assert!(element < self.width, "element {element} out of width {}", self.width);
        self.words[element / WORD_BITS] |= 1u64 << (element % WORD_BITS);
    }

    pub fn remove(&mut self, element: usize) {
        assert!(element < self.width, "element {element} out of width {}", self.width);
        self.words[element / WORD_BITS] &= !(1u64 << (element % WORD_BITS));
    }

    pub fn contains(&self, element: usize) -> bool {
        element < self.width
            && self.words[element / WORD_BITS] & (1u64 << (element % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = BitSet {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.mask_tail();
        s
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Keeps only elements strictly below `bound`.
    pub fn truncated_below(&self, bound: usize) -> BitSet {
        let mut s = self.clone();
        for w in (bound.div_ceil(WORD_BITS))..s.words.len() {
            s.words[w] = 0;
        }
        let rem = bound % WORD_BITS;
        if rem != 0 && bound / WORD_BITS < s.words.len() {
            s.words[bound / WORD_BITS] &= (1u64 << rem) - 1;
        }
        s
    }

    /// Smallest element of `self ∖ other`, if any.
    pub fn first_not_in(&self, other: &BitSet) -> Option<usize> {
        for (i, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let diff = a & !b;
            if diff != 0 {
                return Some(i * WORD_BITS + diff.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            set: self,
            word: 0,
            mask: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lectic comparison with bit 0 most significant: the set containing the
    /// smallest distinguishing element is the larger one.
    pub fn lectic_cmp(&self, other: &BitSet) -> Ordering {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                let first = (a ^ b).trailing_zeros();
                return if a & (1u64 << first) != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.lectic_cmp(other))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

pub struct BitIter<'a> {
    set: &'a BitSet,
    word: usize,
    mask: u64,
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.mask == 0 {
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.mask = self.set.words[self.word];
        }
        let bit = self.mask.trailing_zeros() as usize;
        self.mask &= self.mask - 1;
        Some(self.word * WORD_BITS + bit)
    }
}

/// A rows × cols boolean matrix stored as one [`BitSet`] per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitSet>,
    cols: usize,
}

impl BitMatrix {
    pub fn new(row_count: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitSet::empty(cols); row_count],
            cols,
        }
    }

    pub fn from_fn(row_count: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(row_count, cols);
        for r in 0..row_count {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c);
                }
            }
        }
        m
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].contains(c)
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.rows[r].insert(c);
    }

    pub fn row(&self, r: usize) -> &BitSet {
        &self.rows[r]
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows.len(), |r, c| self.get(c, r))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.rows.len().min(self.cols)).all(|i| self.get(i, i)) && self.rows.len() == self.cols
    }

    /// r ≤ s and s ≤ t imply r ≤ t, i.e. row(s) ⊆ row(r) whenever r relates s.
    pub fn is_transitive(&self) -> bool {
        (0..self.rows.len()).all(|r| {
            self.rows[r]
                .iter()
                .all(|s| s < self.rows.len() && self.rows[s].is_subset(&self.rows[r]))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.rows.len()).all(|r| {
            self.rows[r]
                .iter()
                .all(|s| s == r || !(s < self.rows.len() && self.get(s, r)))
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for row in &self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if row.contains(c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
