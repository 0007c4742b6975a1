//! Finite polarities and the Galois derivation operators.
//!
//! A polarity is a pair of finite carriers `X = 0..x_size`, `Y = 0..y_size`
//! with a relation `R ⊆ X×Y`. The derivations
//! `rho(A) = {y : ∀x∈A, xRy}` and `lam(B) = {x : ∀y∈B, xRy}` form an antitone
//! Galois connection; their composites are closure operators whose fixed
//! points are the stable sets. The induced quasi-orders compare elements by
//! the derivations of their singletons.

use alloc::vec::Vec;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};

/// Which carrier a subset or quasi-order lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// An immutable finite polarity. Rows (`rho` of singletons) and columns
/// (`lam` of singletons) are both materialized so either derivation is a
/// plain intersection scan.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polarity {
    x_size: usize,
    y_size: usize,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

impl Polarity {
    pub fn from_fn(
        x_size: usize,
        y_size: usize,
        mut rel: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let mut rows: Vec<BitSet> = (0..x_size).map(|_| BitSet::empty(y_size)).collect();
        let mut cols: Vec<BitSet> = (0..y_size).map(|_| BitSet::empty(x_size)).collect();
        for x in 0..x_size {
            for y in 0..y_size {
                if rel(x, y) {
                    rows[x].insert(y);
                    cols[y].insert(x);
                }
            }
        }
        Polarity {
            x_size,
            y_size,
            rows,
            cols,
        }
    }

    pub fn from_pairs(x_size: usize, y_size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        for &(x, y) in pairs {
            if x >= x_size {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    size: x_size,
                });
            }
            if y >= y_size {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    size: y_size,
                });
            }
        }
        Ok(Self::from_fn(x_size, y_size, |x, y| {
            pairs.contains(&(x, y))
        }))
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn side_size(&self, side: Side) -> usize {
        match side {
            Side::X => self.x_size,
            Side::Y => self.y_size,
        }
    }

    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    /// Row view: `rho({x})`.
    pub fn row(&self, x: usize) -> &BitSet {
        &self.rows[x]
    }

    /// Column view: `lam({y})`.
    pub fn col(&self, y: usize) -> &BitSet {
        &self.cols[y]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.x_size {
            for y in self.rows[x].iter() {
                out.push((x, y));
            }
        }
        out
    }

    fn check_width(&self, side: Side, s: &BitSet) -> Result<()> {
        let expected = self.side_size(side);
        if s.width() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: s.width(),
            });
        }
        Ok(())
    }

    /// `rho(A) = {y ∈ Y : ∀x∈A, xRy}` — the empty set derives to full `Y`.
    pub fn rho(&self, a: &BitSet) -> Result<BitSet> {
        self.check_width(Side::X, a)?;
        let mut out = BitSet::full(self.y_size);
        for x in a.iter() {
            out.intersect_with(&self.rows[x]);
        }
        Ok(out)
    }

    /// `lam(B) = {x ∈ X : ∀y∈B, xRy}`.
    pub fn lam(&self, b: &BitSet) -> Result<BitSet> {
        self.check_width(Side::Y, b)?;
        let mut out = BitSet::full(self.x_size);
        for y in b.iter() {
            out.intersect_with(&self.cols[y]);
        }
        Ok(out)
    }

    /// Derivation out of the given side (`rho` from X, `lam` from Y).
    pub fn derive(&self, side: Side, s: &BitSet) -> Result<BitSet> {
        match side {
            Side::X => self.rho(s),
            Side::Y => self.lam(s),
        }
    }

    /// Closure `lam(rho(·))` on the X side, `rho(lam(·))` on the Y side.
    pub fn close(&self, side: Side, s: &BitSet) -> Result<BitSet> {
        let derived = self.derive(side, s)?;
        self.derive(side.flip(), &derived)
    }

    pub fn is_stable(&self, side: Side, s: &BitSet) -> Result<bool> {
        Ok(self.close(side, s)? == *s)
    }

    /// `⟨e⟩`: closure of the singleton, the smallest stable set containing `e`.
    pub fn principal_stable(&self, side: Side, e: usize) -> Result<BitSet> {
        let size = self.side_size(side);
        if e >= size {
            return Err(Error::IndexOutOfRange { index: e, size });
        }
        self.close(side, &BitSet::singleton(size, e))
    }

    /// The quasi-order comparing elements by inclusion of their singleton
    /// derivations: `a ≤ b` iff `derive({a}) ⊆ derive({b})`.
    pub fn quasi_order(&self, side: Side) -> QuasiOrder {
        let size = self.side_size(side);
        let rows = |i: usize| match side {
            Side::X => &self.rows[i],
            Side::Y => &self.cols[i],
        };
        let leq = BitMatrix::from_fn(size, size, |a, b| rows(a).is_subset(rows(b)));
        QuasiOrder { side, leq }
    }
}

/// A reflexive transitive relation over one carrier. Row `a` is the
/// principal up-set `[a) = {b : a ≤ b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiOrder {
    side: Side,
    leq: BitMatrix,
}

impl QuasiOrder {
    pub fn from_matrix(side: Side, leq: BitMatrix) -> QuasiOrder {
        QuasiOrder { side, leq }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn size(&self) -> usize {
        self.leq.row_count()
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    pub fn upset(&self, a: usize) -> &BitSet {
        self.leq.row(a)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn is_reflexive(&self) -> bool {
        self.leq.is_reflexive()
    }

    pub fn is_transitive(&self) -> bool {
        self.leq.is_transitive()
    }

    /// `s` is an up-set iff it contains `[a)` for every `a ∈ s`.
    pub fn is_upset(&self, s: &BitSet) -> Result<bool> {
        if s.width() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: s.width(),
            });
        }
        Ok(s.iter().all(|a| self.leq.row(a).is_subset(s)))
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
    fn rho_examples() {
        let neq3 = fixtures::neq3();
        assert_eq!(neq3.rho(&set(3, &[0])).unwrap(), set(3, &[1, 2]));
        assert_eq!(neq3.rho(&set(3, &[])).unwrap(), BitSet::full(3));
        let le2 = fixtures::le2();
        assert_eq!(le2.rho(&set(2, &[1])).unwrap(), set(2, &[1]));
    }

    #[test]
    fn lam_examples() {
        let neq3 = fixtures::neq3();
        assert_eq!(neq3.lam(&set(3, &[1, 2])).unwrap(), set(3, &[0]));
        assert_eq!(neq3.lam(&set(3, &[])).unwrap(), BitSet::full(3));
        let le2 = fixtures::le2();
        assert_eq!(le2.lam(&set(2, &[0, 1])).unwrap(), set(2, &[0]));
    }

    #[test]
    fn close_examples() {
        let neq3 = fixtures::neq3();
        assert_eq!(neq3.close(Side::X, &set(3, &[0])).unwrap(), set(3, &[0]));
        let empty2 = fixtures::empty2();
        assert_eq!(
            empty2.close(Side::X, &set(2, &[0])).unwrap(),
            set(2, &[0, 1])
        );
        let le2 = fixtures::le2();
        assert_eq!(le2.close(Side::X, &set(2, &[1])).unwrap(), set(2, &[0, 1]));
    }

    #[test]
    fn stability_examples() {
        let neq3 = fixtures::neq3();
        for mask in 0u8..8 {
            let s = set(
                3,
                &(0..3).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>(),
            );
            assert!(neq3.is_stable(Side::X, &s).unwrap());
        }
        let le2 = fixtures::le2();
        assert!(!le2.is_stable(Side::X, &set(2, &[1])).unwrap());
        assert!(le2.is_stable(Side::X, &BitSet::full(2)).unwrap());
    }

    #[test]
    fn quasi_order_examples() {
        let neq3 = fixtures::neq3().quasi_order(Side::X);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(neq3.holds(a, b), a == b);
            }
        }
        let empty2 = fixtures::empty2().quasi_order(Side::X);
        for a in 0..2 {
            for b in 0..2 {
                assert!(empty2.holds(a, b));
            }
        }
        let le2 = fixtures::le2().quasi_order(Side::X);
        let expect = [(0, 0), (1, 1), (1, 0)];
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(le2.holds(a, b), expect.contains(&(a, b)));
            }
        }
        assert!(le2.is_reflexive() && le2.is_transitive());
    }

    #[test]
    fn principal_stable_examples() {
        assert_eq!(
            fixtures::neq3().principal_stable(Side::X, 1).unwrap(),
            set(3, &[1])
        );
        assert_eq!(
            fixtures::le2().principal_stable(Side::X, 0).unwrap(),
            set(2, &[0])
        );
        assert_eq!(
            fixtures::empty2().principal_stable(Side::X, 0).unwrap(),
            set(2, &[0, 1])
        );
    }

    #[test]
    fn upset_examples() {
        let q = fixtures::le2().quasi_order(Side::X);
        assert!(q.is_upset(&set(2, &[0])).unwrap());
        assert!(!q.is_upset(&set(2, &[1])).unwrap());
        assert!(q.is_upset(&set(2, &[])).unwrap());
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let le2 = fixtures::le2();
        assert!(matches!(
            le2.rho(&set(3, &[0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn empty_carriers_are_legal() {
        let p = Polarity::from_fn(0, 2, |_, _| false);
        assert_eq!(p.rho(&BitSet::empty(0)).unwrap(), BitSet::full(2));
        assert_eq!(p.lam(&BitSet::full(2)).unwrap(), BitSet::empty(0));
        assert!(p.is_stable(Side::X, &BitSet::empty(0)).unwrap());
    }
}
