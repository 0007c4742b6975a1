//! The complete lattice of stable subsets of `X`, materialized.
//!
//! Enumeration is NextClosure-style: stable sets are produced in strictly
//! increasing lectic order (bit 0 most significant), so element indices are
//! reproducible across runs and platforms and no seen-set is needed. Meets
//! are intersections; joins close the union; an optional table cache is
//! built at construction for small lattices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use crate::polarity::{Polarity, Side};

/// Default cap on the number of enumerated stable sets.
pub const DEFAULT_CAP: usize = 1 << 20;

/// Lattices up to this size get meet/join tables at construction.
const CACHE_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableLattice {
    polarity: Polarity,
    side: Side,
    elements: Vec<BitSet>,
    index: BTreeMap<BitSet, usize>,
    leq: BitMatrix,
    bottom: usize,
    top: usize,
    cache: Option<MeetJoinCache>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct MeetJoinCache {
    meet: Vec<u32>,
    join: Vec<u32>,
}

/// Lectically next stable set after `current`, or `None` at the top.
fn next_stable(p: &Polarity, side: Side, current: &BitSet) -> Result<Option<BitSet>> {
    let n = p.side_size(side);
    for i in (0..n).rev() {
        if current.contains(i) {
            continue;
        }
        let mut seed = current.truncated_below(i);
        seed.insert(i);
        let closed = p.close(side, &seed)?;
        // Accept iff closure adds nothing lectically before i.
        if closed.truncated_below(i) == current.truncated_below(i) {
            return Ok(Some(closed));
        }
    }
    Ok(None)
}

pub fn enumerate_stable(p: &Polarity) -> Result<StableLattice> {
    enumerate_stable_capped(p, DEFAULT_CAP)
}

pub fn enumerate_stable_capped(p: &Polarity, cap: usize) -> Result<StableLattice> {
    enumerate_side_capped(p, Side::X, cap)
}

/// Enumerates the stable sets of either side; the X side is the stable set
/// lattice proper, the Y side exists for the dual-isomorphism checks.
pub fn enumerate_side_capped(p: &Polarity, side: Side, cap: usize) -> Result<StableLattice> {
    let mut elements = Vec::new();
    let mut current = p.close(side, &BitSet::empty(p.side_size(side)))?;
    loop {
        if elements.len() >= cap {
            return Err(Error::CapacityExceeded { cap });
        }
        elements.push(current.clone());
        match next_stable(p, side, &current)? {
            Some(next) => current = next,
            None => break,
        }
    }

    let len = elements.len();
    let index: BTreeMap<BitSet, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let leq = BitMatrix::from_fn(len, len, |a, b| elements[a].is_subset(&elements[b]));
    let bottom = 0;
    let top = len - 1;
    debug_assert!(elements[top].is_full());

    let cache = if len <= CACHE_LIMIT {
        let mut meet = Vec::with_capacity(len * len);
        let mut join = Vec::with_capacity(len * len);
        for a in 0..len {
            for b in 0..len {
                let m = elements[a].intersection(&elements[b]);
                meet.push(index[&m] as u32);
                let j = p.close(side, &elements[a].union(&elements[b]))?;
                join.push(index[&j] as u32);
            }
        }
        Some(MeetJoinCache { meet, join })
    } else {
        None
    };

    Ok(StableLattice {
        polarity: p.clone(),
        side,
        elements,
        index,
        leq,
        bottom,
        top,
        cache,
    })
}

impl StableLattice {
    pub fn polarity(&self) -> &Polarity {
        &self.polarity
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> Result<&BitSet> {
        self.elements.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            size: self.len(),
        })
    }

    pub fn elements(&self) -> &[BitSet] {
        &self.elements
    }

    pub fn index_of(&self, s: &BitSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq.get(a, b))
    }

    pub fn order_matrix(&self) -> &BitMatrix {
        &self.leq
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.len(),
            });
        }
        Ok(())
    }

    pub fn meet2(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        if let Some(cache) = &self.cache {
            return Ok(cache.meet[a * self.len() + b] as usize);
        }
        let m = self.elements[a].intersection(&self.elements[b]);
        Ok(self.index[&m])
    }

    pub fn join2(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        if let Some(cache) = &self.cache {
            return Ok(cache.join[a * self.len() + b] as usize);
        }
        let j = self
            .polarity
            .close(self.side, &self.elements[a].union(&self.elements[b]))?;
        Ok(self.index[&j])
    }

    /// Meet of a family: plain intersection. The empty family yields top.
    pub fn meet(&self, items: &[usize]) -> Result<usize> {
        let mut acc = BitSet::full(self.polarity.side_size(self.side));
        for &i in items {
            self.check(i)?;
            acc.intersect_with(&self.elements[i]);
        }
        Ok(self.index[&acc])
    }

    /// Join of a family: closure of the union. The empty family yields bottom.
    pub fn join(&self, items: &[usize]) -> Result<usize> {
        let mut acc = BitSet::empty(self.polarity.side_size(self.side));
        for &i in items {
            self.check(i)?;
            acc.union_with(&self.elements[i]);
        }
        let closed = self.polarity.close(self.side, &acc)?;
        Ok(self.index[&closed])
    }

    /// Both decomposition identities for one element: it is the join of the
    /// principal closures of its points and the meet of the single-column
    /// derivations over its derived set.
    pub fn verify_decomposition(&self, a: usize) -> Result<bool> {
        self.check(a)?;
        let elem = &self.elements[a];
        let width = self.polarity.side_size(self.side);

        let mut union = BitSet::empty(width);
        for x in elem.iter() {
            union.union_with(&self.polarity.principal_stable(self.side, x)?);
        }
        let join = self.polarity.close(self.side, &union)?;

        let derived = self.polarity.derive(self.side, elem)?;
        let mut meet = BitSet::full(width);
        for y in derived.iter() {
            let col = self
                .polarity
                .derive(self.side.flip(), &BitSet::singleton(derived.width(), y))?;
            meet.intersect_with(&col);
        }

        Ok(join == *elem && meet == *elem)
    }

    /// Hasse cover pairs `(lower, upper)` of the inclusion order, ascending.
    pub fn hasse_covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq.get(a, b) {
                    continue;
                }
                let strictly_between =
                    (0..n).any(|c| c != a && c != b && self.leq.get(a, c) && self.leq.get(c, b));
                if !strictly_between {
                    covers.push((a, b));
                }
            }
        }
        covers
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(width: usize, elems: &[usize]) -> BitSet {
        BitSet::from_elements(width, elems)
    }

    #[test]
    fn neq3_is_the_boolean_cube() {
        let lat = enumerate_stable(&fixtures::neq3()).unwrap();
        assert_eq!(lat.len(), 8);
        assert_eq!(*lat.element(lat.bottom()).unwrap(), set(3, &[]));
        assert_eq!(*lat.element(lat.top()).unwrap(), BitSet::full(3));
        // lectic order, bit 0 most significant
        let expect: Vec<BitSet> = [
            &[][..],
            &[2],
            &[1],
            &[1, 2],
            &[0],
            &[0, 2],
            &[0, 1],
            &[0, 1, 2],
        ]
        .iter()
        .map(|e| set(3, e))
        .collect();
        assert_eq!(lat.elements(), &expect[..]);
    }

    #[test]
    fn le2_is_a_two_chain() {
        let lat = enumerate_stable(&fixtures::le2()).unwrap();
        assert_eq!(lat.len(), 2);
        assert_eq!(*lat.element(lat.bottom()).unwrap(), set(2, &[0]));
        assert_eq!(*lat.element(lat.top()).unwrap(), set(2, &[0, 1]));
    }

    #[test]
    fn empty2_is_a_two_chain_with_empty_bottom() {
        let lat = enumerate_stable(&fixtures::empty2()).unwrap();
        assert_eq!(lat.len(), 2);
        assert_eq!(*lat.element(0).unwrap(), set(2, &[]));
        assert_eq!(*lat.element(1).unwrap(), set(2, &[0, 1]));
        // bottom = lam(full Y)
        let p = fixtures::empty2();
        assert_eq!(
            *lat.element(lat.bottom()).unwrap(),
            p.lam(&BitSet::full(2)).unwrap()
        );
    }

    #[test]
    fn join_meet_examples() {
        let lat = enumerate_stable(&fixtures::neq3()).unwrap();
        let i = |e: &[usize]| lat.index_of(&set(3, e)).unwrap();
        assert_eq!(lat.join(&[i(&[0]), i(&[1])]).unwrap(), i(&[0, 1]));
        assert_eq!(lat.meet(&[i(&[0, 1]), i(&[1, 2])]).unwrap(), i(&[1]));
        assert_eq!(lat.meet(&[]).unwrap(), lat.top());
        assert_eq!(lat.meet(&[i(&[0]), lat.top()]).unwrap(), i(&[0]));
        assert_eq!(lat.join(&[i(&[0]), i(&[0])]).unwrap(), i(&[0]));

        let le2 = enumerate_stable(&fixtures::le2()).unwrap();
        assert_eq!(le2.join(&[]).unwrap(), le2.bottom());
    }

    #[test]
    fn decomposition_holds_on_fixtures() {
        for p in [fixtures::neq3(), fixtures::le2(), fixtures::empty2()] {
            let lat = enumerate_stable(&p).unwrap();
            for a in 0..lat.len() {
                assert!(lat.verify_decomposition(a).unwrap());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_stable_capped(&fixtures::neq3(), 4),
            Err(Error::CapacityExceeded { cap: 4 })
        ));
    }

    #[test]
    fn x_and_y_side_counts_agree() {
        for p in [fixtures::neq3(), fixtures::le2(), fixtures::empty2()] {
            let x = enumerate_side_capped(&p, Side::X, DEFAULT_CAP).unwrap();
            let y = enumerate_side_capped(&p, Side::Y, DEFAULT_CAP).unwrap();
            assert_eq!(x.len(), y.len());
        }
    }

    #[test]
    fn hasse_covers_regenerate_the_order() {
        let lat = enumerate_stable(&fixtures::neq3()).unwrap();
        let covers = lat.hasse_covers();
        assert_eq!(covers.len(), 12); // edges of the 3-cube
                                      // reachability along covers equals the order matrix
        let n = lat.len();
        let mut reach = alloc::vec![alloc::vec![false; n]; n];
        for i in 0..n {
            reach[i][i] = true;
        }
        for _ in 0..n {
            for &(a, b) in &covers {
                for s in 0..n {
                    if reach[s][a] {
                        reach[s][b] = true;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                assert_eq!(reach[a][b], lat.leq(a, b).unwrap());
            }
        }
    }
}
