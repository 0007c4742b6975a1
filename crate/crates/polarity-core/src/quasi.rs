//! ε-typed relations and the operators they induce.
//!
//! A monotonicity type assigns each coordinate either the plain carrier `X`
//! or the order-dual reading through `Y`. A relation over the mixed product
//! `X^ε × Y` induces an operator that treats ∂-coordinates through the
//! derivation `rho`. The all-plain case coincides exactly with the
//! machinery in [`crate::omega`], which the suites check.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use crate::polarity::{Polarity, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Eps {
    One,
    Partial,
}

/// A sequence over {1, ∂} fixing how each coordinate is read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotonicityType(pub Vec<Eps>);

impl MonotonicityType {
    pub fn all_one(n: usize) -> Self {
        MonotonicityType(vec![Eps::One; n])
    }

    /// Compact interchange form: one character per coordinate, `1` for the
    /// plain reading and `d` for the order-dual one.
    pub fn to_compact(&self) -> alloc::string::String {
        self.0
            .iter()
            .map(|e| match e {
                Eps::One => '1',
                Eps::Partial => 'd',
            })
            .collect()
    }

    pub fn from_compact(text: &str) -> Result<Self> {
        let mut eps = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '1' => eps.push(Eps::One),
                'd' => eps.push(Eps::Partial),
                _ => return Err(Error::InvalidEpsCharacter(c)),
            }
        }
        Ok(MonotonicityType(eps))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> Eps {
        self.0[i]
    }

    /// Carrier size of coordinate `i` over the given polarity.
    pub fn carrier_size(&self, p: &Polarity, i: usize) -> usize {
        match self.0[i] {
            Eps::One => p.x_size(),
            Eps::Partial => p.y_size(),
        }
    }

    pub fn side(&self, i: usize) -> Side {
        match self.0[i] {
            Eps::One => Side::X,
            Eps::Partial => Side::Y,
        }
    }

    /// Flat size of the mixed product, coordinate 0 most significant.
    pub fn space_size(&self, p: &Polarity) -> Result<usize> {
        let mut acc: usize = 1;
        for i in 0..self.arity() {
            acc = acc
                .checked_mul(self.carrier_size(p, i))
                .ok_or(Error::CapacityExceeded { cap: usize::MAX })?;
        }
        Ok(acc)
    }

    pub fn flatten(&self, p: &Polarity, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| acc * self.carrier_size(p, i) + c)
    }

    pub fn tuples(&self, p: &Polarity) -> Vec<Vec<usize>> {
        let members: Vec<Vec<usize>> = (0..self.arity())
            .map(|i| (0..self.carrier_size(p, i)).collect())
            .collect();
        let mut out = Vec::new();
        crate::omega::for_each_product(&members, &mut |t| {
            out.push(t.to_vec());
            true
        });
        out
    }
}

/// A relation over `X^ε × Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelSEps {
    eps: MonotonicityType,
    x_size: usize,
    y_size: usize,
    tuples: BitSet,
}

impl RelSEps {
    pub fn empty(eps: MonotonicityType, p: &Polarity) -> Result<Self> {
        let width = eps
            .space_size(p)?
            .checked_mul(p.y_size())
            .ok_or(Error::CapacityExceeded { cap: usize::MAX })?;
        Ok(RelSEps {
            eps,
            x_size: p.x_size(),
            y_size: p.y_size(),
            tuples: BitSet::empty(width),
        })
    }

    pub fn from_fn(
        eps: MonotonicityType,
        p: &Polarity,
        mut rel: impl FnMut(&[usize], usize) -> bool,
    ) -> Result<Self> {
        let mut r = Self::empty(eps, p)?;
        let eps = r.eps.clone();
        for zs in eps.tuples(p) {
            for y in 0..p.y_size() {
                if rel(&zs, y) {
                    r.insert_with(p, &zs, y);
                }
            }
        }
        Ok(r)
    }

    /// A unary all-plain relation with the same pairs as an `S`-relation.
    pub fn from_rel_s(p: &Polarity, s: &crate::omega::RelS) -> Result<Self> {
        let eps = MonotonicityType::all_one(s.arity());
        Self::from_fn(eps, p, |zs, y| s.holds(zs, y))
    }

    pub fn eps(&self) -> &MonotonicityType {
        &self.eps
    }

    fn flat(&self, p: &Polarity, zs: &[usize], y: usize) -> usize {
        self.eps.flatten(p, zs) * self.y_size + y
    }

    pub(crate) fn insert_with(&mut self, p: &Polarity, zs: &[usize], y: usize) {
        let i = self.flat(p, zs, y);
        self.tuples.insert(i);
    }

    pub fn holds(&self, p: &Polarity, zs: &[usize], y: usize) -> bool {
        self.tuples.contains(self.flat(p, zs, y))
    }

    pub fn tuple_list(&self, p: &Polarity) -> Vec<(Vec<usize>, usize)> {
        let mut out = Vec::new();
        for zs in self.eps.tuples(p) {
            for y in 0..self.y_size {
                if self.holds(p, &zs, y) {
                    out.push((zs.clone(), y));
                }
            }
        }
        out
    }

    /// Row section `{y : z⃗Sy}`.
    pub fn row_section(&self, p: &Polarity, zs: &[usize]) -> BitSet {
        let mut out = BitSet::empty(self.y_size);
        for y in 0..self.y_size {
            if self.holds(p, zs, y) {
                out.insert(y);
            }
        }
        out
    }

    /// Column section varying coordinate `i` over its own carrier.
    pub fn column_section(&self, p: &Polarity, zs: &[usize], i: usize, y: usize) -> BitSet {
        let size = self.eps.carrier_size(p, i);
        let mut probe = zs.to_vec();
        let mut out = BitSet::empty(size);
        for z in 0..size {
            probe[i] = z;
            if self.holds(p, &probe, y) {
                out.insert(z);
            }
        }
        out
    }
}

/// Section stability, coordinate-wise: row sections must be Y-stable;
/// the section varying coordinate `i` must be stable on the carrier named
/// by ε(i). The all-plain case coincides with the plain validator; the
/// general case is the minimal extension of the requirement.
pub fn validate_eps_sections(p: &Polarity, s: &RelSEps) -> Result<bool> {
    for zs in s.eps.tuples(p) {
        let row = s.row_section(p, &zs);
        if !p.is_stable(Side::Y, &row)? {
            return Ok(false);
        }
        for i in 0..s.eps.arity() {
            if zs[i] != 0 {
                continue;
            }
            for y in 0..p.y_size() {
                let col = s.column_section(p, &zs, i, y);
                if !p.is_stable(s.eps.side(i), &col)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `f(A⃗) = lam{y : ∀z⃗ ∈ π A⃗^ε, z⃗Sy}` where a ∂-coordinate contributes
/// `rho(A_i)` to the product instead of `A_i`.
pub fn f_s_eps(p: &Polarity, s: &RelSEps, args: &[BitSet]) -> Result<BitSet> {
    if args.len() != s.eps.arity() {
        return Err(Error::ArityMismatch {
            expected: s.eps.arity(),
            found: args.len(),
        });
    }
    let mut members = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        if !p.is_stable(Side::X, a)? {
            return Err(Error::NotStable);
        }
        let coord = match s.eps.coord(i) {
            Eps::One => a.clone(),
            Eps::Partial => p.rho(a)?,
        };
        members.push(coord.to_vec());
    }
    let mut ys = BitSet::full(p.y_size());
    crate::omega::for_each_product(&members, &mut |zs| {
        ys.intersect_with(&s.row_section(p, zs));
        true
    });
    p.lam(&ys)
}

/// The product quasi-order on `X^ε`: coordinate `i` compares by the X-side
/// order for 1 and by the Y-side order for ∂. Returned over the flattened
/// mixed-radix index space.
pub fn eps_quasi_order(p: &Polarity, eps: &MonotonicityType) -> Result<EpsOrder> {
    let qx = p.quasi_order(Side::X);
    let qy = p.quasi_order(Side::Y);
    let tuples = eps.tuples(p);
    debug_assert_eq!(tuples.len(), eps.space_size(p)?);
    let leq = BitMatrix::from_fn(tuples.len(), tuples.len(), |a, b| {
        tuples[a]
            .iter()
            .zip(&tuples[b])
            .enumerate()
            .all(|(i, (&za, &zb))| match eps.coord(i) {
                Eps::One => qx.holds(za, zb),
                Eps::Partial => qy.holds(za, zb),
            })
    });
    Ok(EpsOrder {
        eps: eps.clone(),
        tuples,
        leq,
    })
}

/// Quasi-order over the mixed product, with its tuple table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsOrder {
    pub eps: MonotonicityType,
    pub tuples: Vec<Vec<usize>>,
    pub leq: BitMatrix,
}

impl EpsOrder {
    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }
}

/// Maps a mixed tuple coordinatewise: 1-coordinates through α,
/// ∂-coordinates through β.
pub fn alpha_eps(
    eps: &MonotonicityType,
    alpha: &[usize],
    beta: &[usize],
    zs: &[usize],
) -> Vec<usize> {
    zs.iter()
        .enumerate()
        .map(|(i, &z)| match eps.coord(i) {
            Eps::One => alpha[z],
            Eps::Partial => beta[z],
        })
        .collect()
}

/// Verdicts for the generalized back/forth conditions of an ε-relation
/// along carrier maps whose base pair is already a bounded morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsCertificate {
    pub back_s: crate::morphism::Verdict,
    pub forth_s: crate::morphism::Verdict,
}

impl EpsCertificate {
    pub fn all_pass(&self) -> bool {
        self.back_s.passed() && self.forth_s.passed()
    }
}

pub fn verify_eps_morphism(
    src: &Polarity,
    dst: &Polarity,
    alpha: &[usize],
    beta: &[usize],
    s: &RelSEps,
    s_dst: &RelSEps,
    eps: &MonotonicityType,
) -> Result<EpsCertificate> {
    use crate::morphism::Verdict;
    if s.eps() != eps || s_dst.eps() != eps {
        return Err(Error::ArityMismatch {
            expected: eps.arity(),
            found: s.eps().arity(),
        });
    }
    if alpha.len() != src.x_size() {
        return Err(Error::DimensionMismatch {
            expected: src.x_size(),
            found: alpha.len(),
        });
    }
    if beta.len() != src.y_size() {
        return Err(Error::DimensionMismatch {
            expected: src.y_size(),
            found: beta.len(),
        });
    }

    let src_tuples = eps.tuples(src);
    let dst_tuples = eps.tuples(dst);
    let dst_qx = dst.quasi_order(Side::X);
    let dst_qy = dst.quasi_order(Side::Y);
    let dst_leq = |i: usize, a: usize, b: usize| match eps.coord(i) {
        Eps::One => dst_qx.holds(a, b),
        Eps::Partial => dst_qy.holds(a, b),
    };

    // α_ε(z⃗) S' β(y) ⟹ z⃗ S y
    let mut back_s = Verdict::Pass;
    'outer: for zs in &src_tuples {
        let mapped = alpha_eps(eps, alpha, beta, zs);
        for y in 0..src.y_size() {
            if s_dst.holds(dst, &mapped, beta[y]) && !s.holds(src, zs, y) {
                let mut w = zs.clone();
                w.push(y);
                back_s = Verdict::Fail(w);
                break 'outer;
            }
        }
    }

    // (α⁻¹[w⃗)_ε) S y ⟹ w⃗ S' β(y)
    let mut forth_s = Verdict::Pass;
    'outer2: for ws in &dst_tuples {
        for y in 0..src.y_size() {
            let all_related = src_tuples
                .iter()
                .filter(|zs| {
                    let mapped = alpha_eps(eps, alpha, beta, zs);
                    ws.iter()
                        .zip(&mapped)
                        .enumerate()
                        .all(|(i, (&w, &mz))| dst_leq(i, w, mz))
                })
                .all(|zs| s.holds(src, zs, y));
            if all_related && !s_dst.holds(dst, ws, beta[y]) {
                let mut w = ws.clone();
                w.push(y);
                forth_s = Verdict::Fail(w);
                break 'outer2;
            }
        }
    }

    Ok(EpsCertificate { back_s, forth_s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::enumerate_stable;
    use crate::omega::RelS;

    fn set(width: usize, elems: &[usize]) -> BitSet {
        BitSet::from_elements(width, elems)
    }

    #[test]
    fn all_one_reduces_to_plain_f_s() {
        for (_, op) in fixtures::fixture_omegas() {
            let s_eps = RelSEps::from_rel_s(op.base(), op.s()).unwrap();
            assert!(validate_eps_sections(op.base(), &s_eps).unwrap());
            let lat = enumerate_stable(op.base()).unwrap();
            for a in lat.elements() {
                assert_eq!(
                    f_s_eps(op.base(), &s_eps, &[a.clone()]).unwrap(),
                    op.f_s(&[a.clone()]).unwrap()
                );
            }
        }
    }

    #[test]
    fn partial_equality_relation_on_neq3() {
        // eps = (∂), S = equality on Y×Y
        let p = fixtures::neq3();
        let eps = MonotonicityType(vec![Eps::Partial]);
        let s = RelSEps::from_fn(eps, &p, |zs, y| zs[0] == y).unwrap();
        assert!(validate_eps_sections(&p, &s).unwrap());
        // frozen values: derived by evaluating the displayed formula
        let f = |a: &BitSet| f_s_eps(&p, &s, &[a.clone()]).unwrap();
        assert_eq!(f(&set(3, &[])), BitSet::full(3));
        assert_eq!(f(&set(3, &[0])), BitSet::full(3));
        assert_eq!(f(&set(3, &[0, 1])), set(3, &[0, 1]));
        assert_eq!(f(&set(3, &[0, 2])), set(3, &[0, 2]));
        assert_eq!(f(&BitSet::full(3)), set(3, &[]));

        // independent double evaluation of the same formula
        let lat = enumerate_stable(&p).unwrap();
        for a in lat.elements() {
            let rho_a = p.rho(a).unwrap();
            let mut ys = BitSet::empty(3);
            for y in 0..3 {
                if rho_a.iter().all(|z| z == y) {
                    ys.insert(y);
                }
            }
            assert_eq!(f(a), p.lam(&ys).unwrap());
        }
    }

    #[test]
    fn nullary_is_a_constant() {
        let p = fixtures::neq3();
        let eps = MonotonicityType::all_one(0);
        let row = p.rho(&set(3, &[0])).unwrap();
        let s = RelSEps::from_fn(eps, &p, |_, y| row.contains(y)).unwrap();
        assert_eq!(f_s_eps(&p, &s, &[]).unwrap(), p.lam(&row).unwrap());
    }

    #[test]
    fn eps_order_examples() {
        let p = fixtures::le2();
        // all-one unary: equals the X-side order
        let one = eps_quasi_order(&p, &MonotonicityType::all_one(1)).unwrap();
        let qx = p.quasi_order(Side::X);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(one.holds(a, b), qx.holds(a, b));
            }
        }
        // (∂) equals the Y-side order
        let par = eps_quasi_order(&p, &MonotonicityType(vec![Eps::Partial])).unwrap();
        let qy = p.quasi_order(Side::Y);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(par.holds(a, b), qy.holds(a, b));
            }
        }
        // mixed (1,∂): componentwise product, exhaustively
        let eps = MonotonicityType(vec![Eps::One, Eps::Partial]);
        let mixed = eps_quasi_order(&p, &eps).unwrap();
        for (ai, a) in mixed.tuples.iter().enumerate() {
            for (bi, b) in mixed.tuples.iter().enumerate() {
                let expect = qx.holds(a[0], b[0]) && qy.holds(a[1], b[1]);
                assert_eq!(mixed.holds(ai, bi), expect);
            }
        }
    }

    #[test]
    fn all_one_morphism_verdicts_match_plain_checker() {
        let op = fixtures::with_r_relations(&fixtures::neq3());
        let eps = MonotonicityType::all_one(1);
        let s_eps = RelSEps::from_rel_s(op.base(), op.s()).unwrap();
        let id: alloc::vec::Vec<usize> = (0..3).collect();
        let cert =
            verify_eps_morphism(op.base(), op.base(), &id, &id, &s_eps, &s_eps, &eps).unwrap();
        assert!(cert.all_pass());
        let plain = crate::morphism::verify(&crate::morphism::identity(&op));
        assert_eq!(cert.back_s.passed(), plain.back_s.passed());
        assert_eq!(cert.forth_s.passed(), plain.forth_s.passed());
    }

    #[test]
    fn broken_beta_fails_forth_with_witness() {
        // eps = (∂) on le2 with S = the relation relating rho-points to
        // themselves; swapping β breaks the forth condition
        let p = fixtures::le2();
        let eps = MonotonicityType(vec![Eps::Partial]);
        let s = RelSEps::from_fn(eps.clone(), &p, |zs, y| zs[0] <= y).unwrap();
        let alpha = [0usize, 1];
        let beta_swapped = [1usize, 0];
        let cert = verify_eps_morphism(&p, &p, &alpha, &beta_swapped, &s, &s, &eps).unwrap();
        assert!(!cert.forth_s.passed());
        assert!(cert.forth_s.witness().is_some());
    }

    #[test]
    fn compact_string_roundtrip() {
        let eps = MonotonicityType(vec![Eps::One, Eps::Partial, Eps::One]);
        assert_eq!(eps.to_compact(), "1d1");
        assert_eq!(MonotonicityType::from_compact("1d1").unwrap(), eps);
        assert!(matches!(
            MonotonicityType::from_compact("1x"),
            Err(crate::error::Error::InvalidEpsCharacter('x'))
        ));
    }

    #[test]
    fn unary_s_from_rel_s_roundtrip() {
        let p = fixtures::le2();
        let s = RelS::from_polarity(&p);
        let s_eps = RelSEps::from_rel_s(&p, &s).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(s_eps.holds(&p, &[x], y), s.holds(&[x], y));
            }
        }
    }
}
