//! Higher-arity relations on a polarity and the operators they induce.
//!
//! An `S ⊆ Xⁿ×Y` whose sections are all stable induces a complete normal
//! operator `f_S` on the stable set lattice; a `T ⊆ X×Yᵐ` likewise induces a
//! complete normal dual operator `g_T`. Conversely every complete normal
//! (dual) operator arises from a unique such relation, and both directions
//! are implemented here together with the box/diamond pair and the residuals.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::lattice::StableLattice;
use crate::nlo::{FiniteLattice, OmegaNlo, OpTable};
use crate::polarity::{Polarity, Side};

/// Flattened index space size for `base^arity`, guarded against overflow.
fn power(base: usize, arity: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..arity {
        acc = acc
            .checked_mul(base)
            .ok_or(Error::CapacityExceeded { cap: usize::MAX })?;
    }
    Ok(acc)
}

/// Mixed-radix flattening of a tuple, coordinate 0 most significant.
fn flatten(tuple: &[usize], radix: usize) -> usize {
    tuple.iter().fold(0, |acc, &c| acc * radix + c)
}

/// Iterates the product of the given member lists, invoking `f` on each
/// tuple. Returns early with `false` from `f` to stop.
pub(crate) fn for_each_product(members: &[Vec<usize>], f: &mut impl FnMut(&[usize]) -> bool) {
    let n = members.len();
    if members.iter().any(|m| m.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; n];
    let mut tuple: Vec<usize> = idx.iter().zip(members).map(|(&i, m)| m[i]).collect();
    loop {
        if !f(&tuple) {
            return;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < members[k].len() {
                tuple[k] = members[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = members[k][0];
        }
    }
}

/// All tuples of `0..size` of the given arity, in ascending flat order.
/// Arity 0 yields exactly the empty tuple.
pub(crate) fn all_tuples(size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let members: Vec<Vec<usize>> = (0..arity).map(|_| (0..size).collect()).collect();
    for_each_product(&members, &mut |t| {
        out.push(t.to_vec());
        true
    });
    out
}

/// A relation `S ⊆ Xⁿ×Y`, stored as a bitset over the flattened tuple space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelS {
    arity: usize,
    x_size: usize,
    y_size: usize,
    tuples: BitSet,
}

impl RelS {
    pub fn empty(arity: usize, x_size: usize, y_size: usize) -> Result<Self> {
        let width = power(x_size, arity)?
            .checked_mul(y_size)
            .ok_or(Error::CapacityExceeded { cap: usize::MAX })?;
        Ok(RelS {
            arity,
            x_size,
            y_size,
            tuples: BitSet::empty(width),
        })
    }

    pub fn full(arity: usize, x_size: usize, y_size: usize) -> Result<Self> {
        let mut r = Self::empty(arity, x_size, y_size)?;
        r.tuples = BitSet::full(r.tuples.width());
        Ok(r)
    }

    pub fn from_tuples(
        arity: usize,
        x_size: usize,
        y_size: usize,
        tuples: &[(Vec<usize>, usize)],
    ) -> Result<Self> {
        let mut r = Self::empty(arity, x_size, y_size)?;
        for (xs, y) in tuples {
            if xs.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: xs.len(),
                });
            }
            for &x in xs {
                if x >= x_size {
                    return Err(Error::IndexOutOfRange {
                        index: x,
                        size: x_size,
                    });
                }
            }
            if *y >= y_size {
                return Err(Error::IndexOutOfRange {
                    index: *y,
                    size: y_size,
                });
            }
            r.insert(xs, *y);
        }
        Ok(r)
    }

    /// The polarity's own relation viewed as a unary `S`.
    pub fn from_polarity(p: &Polarity) -> Self {
        let mut r = Self::empty(1, p.x_size(), p.y_size()).expect("unary fits");
        for (x, y) in p.pairs() {
            r.insert(&[x], y);
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    fn flat(&self, xs: &[usize], y: usize) -> usize {
        flatten(xs, self.x_size) * self.y_size + y
    }

    pub(crate) fn insert(&mut self, xs: &[usize], y: usize) {
        let i = self.flat(xs, y);
        self.tuples.insert(i);
    }

    pub fn holds(&self, xs: &[usize], y: usize) -> bool {
        debug_assert_eq!(xs.len(), self.arity);
        self.tuples.contains(self.flat(xs, y))
    }

    pub fn tuple_list(&self) -> Vec<(Vec<usize>, usize)> {
        let mut out = Vec::new();
        for xs in all_tuples(self.x_size, self.arity) {
            for y in 0..self.y_size {
                if self.holds(&xs, y) {
                    out.push((xs.clone(), y));
                }
            }
        }
        out
    }

    /// `S[x⃗,−] ⊆ Y`.
    pub fn row_section(&self, xs: &[usize]) -> Result<BitSet> {
        self.check_xs(xs)?;
        let mut out = BitSet::empty(self.y_size);
        for y in 0..self.y_size {
            if self.holds(xs, y) {
                out.insert(y);
            }
        }
        Ok(out)
    }

    /// `S[x⃗[−]ᵢ, y] ⊆ X`: the slot `i` of `xs` is ignored and varied.
    pub fn column_section(&self, xs: &[usize], i: usize, y: usize) -> Result<BitSet> {
        self.check_xs(xs)?;
        if i >= self.arity {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.arity,
            });
        }
        if y >= self.y_size {
            return Err(Error::IndexOutOfRange {
                index: y,
                size: self.y_size,
            });
        }
        let mut probe = xs.to_vec();
        let mut out = BitSet::empty(self.x_size);
        for x in 0..self.x_size {
            probe[i] = x;
            if self.holds(&probe, y) {
                out.insert(x);
            }
        }
        Ok(out)
    }

    fn check_xs(&self, xs: &[usize]) -> Result<()> {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: xs.len(),
            });
        }
        for &x in xs {
            if x >= self.x_size {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    size: self.x_size,
                });
            }
        }
        Ok(())
    }

    /// Reads a binary relation as a `T`-type relation (same pair set).
    pub fn as_rel_t(&self) -> Result<RelT> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        Ok(RelT {
            arity: 1,
            x_size: self.x_size,
            y_size: self.y_size,
            tuples: self.tuples.clone(),
        })
    }
}

/// A relation `T ⊆ X×Yᵐ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelT {
    arity: usize,
    x_size: usize,
    y_size: usize,
    tuples: BitSet,
}

impl RelT {
    pub fn empty(arity: usize, x_size: usize, y_size: usize) -> Result<Self> {
        let width = power(y_size, arity)?
            .checked_mul(x_size)
            .ok_or(Error::CapacityExceeded { cap: usize::MAX })?;
        Ok(RelT {
            arity,
            x_size,
            y_size,
            tuples: BitSet::empty(width),
        })
    }

    pub fn full(arity: usize, x_size: usize, y_size: usize) -> Result<Self> {
        let mut r = Self::empty(arity, x_size, y_size)?;
        r.tuples = BitSet::full(r.tuples.width());
        Ok(r)
    }

    pub fn from_tuples(
        arity: usize,
        x_size: usize,
        y_size: usize,
        tuples: &[(usize, Vec<usize>)],
    ) -> Result<Self> {
        let mut r = Self::empty(arity, x_size, y_size)?;
        for (x, ys) in tuples {
            if ys.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: ys.len(),
                });
            }
            if *x >= x_size {
                return Err(Error::IndexOutOfRange {
                    index: *x,
                    size: x_size,
                });
            }
            for &y in ys {
                if y >= y_size {
                    return Err(Error::IndexOutOfRange {
                        index: y,
                        size: y_size,
                    });
                }
            }
            r.insert(*x, ys);
        }
        Ok(r)
    }

    pub fn from_polarity(p: &Polarity) -> Self {
        let mut r = Self::empty(1, p.x_size(), p.y_size()).expect("unary fits");
        for (x, y) in p.pairs() {
            r.insert(x, &[y]);
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    fn flat(&self, x: usize, ys: &[usize]) -> usize {
        x * power(self.y_size, self.arity).expect("validated at construction")
            + flatten(ys, self.y_size)
    }

    pub(crate) fn insert(&mut self, x: usize, ys: &[usize]) {
        let i = self.flat(x, ys);
        self.tuples.insert(i);
    }

    pub fn holds(&self, x: usize, ys: &[usize]) -> bool {
        debug_assert_eq!(ys.len(), self.arity);
        self.tuples.contains(self.flat(x, ys))
    }

    pub fn tuple_list(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out = Vec::new();
        for x in 0..self.x_size {
            for ys in all_tuples(self.y_size, self.arity) {
                if self.holds(x, &ys) {
                    out.push((x, ys.clone()));
                }
            }
        }
        out
    }

    /// `T[−,y⃗] ⊆ X`.
    pub fn row_section(&self, ys: &[usize]) -> Result<BitSet> {
        self.check_ys(ys)?;
        let mut out = BitSet::empty(self.x_size);
        for x in 0..self.x_size {
            if self.holds(x, ys) {
                out.insert(x);
            }
        }
        Ok(out)
    }

    /// `T[x, y⃗[−]ᵢ] ⊆ Y`.
    pub fn column_section(&self, x: usize, ys: &[usize], i: usize) -> Result<BitSet> {
        self.check_ys(ys)?;
        if i >= self.arity {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.arity,
            });
        }
        if x >= self.x_size {
            return Err(Error::IndexOutOfRange {
                index: x,
                size: self.x_size,
            });
        }
        let mut probe = ys.to_vec();
        let mut out = BitSet::empty(self.y_size);
        for y in 0..self.y_size {
            probe[i] = y;
            if self.holds(x, &probe) {
                out.insert(y);
            }
        }
        Ok(out)
    }

    fn check_ys(&self, ys: &[usize]) -> Result<()> {
        if ys.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: ys.len(),
            });
        }
        for &y in ys {
            if y >= self.y_size {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    size: self.y_size,
                });
            }
        }
        Ok(())
    }

    pub fn as_rel_s(&self) -> Result<RelS> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        Ok(RelS {
            arity: 1,
            x_size: self.x_size,
            y_size: self.y_size,
            tuples: self.tuples.clone(),
        })
    }
}

/// Where a bad section was found and which element its closure adds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionId {
    SRow {
        xs: Vec<usize>,
    },
    SColumn {
        xs: Vec<usize>,
        coord: usize,
        y: usize,
    },
    TRow {
        ys: Vec<usize>,
    },
    TColumn {
        x: usize,
        ys: Vec<usize>,
        coord: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionViolation {
    pub section: SectionId,
    /// An element of the closure that is missing from the section.
    pub witness: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SectionReport {
    pub violations: Vec<SectionViolation>,
}

impl SectionReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks stability of every section of `s` and `t` over `p`, literally:
/// row sections of `S` and column sections of `T` against the Y-side
/// closure, the other two kinds against the X-side closure.
pub fn validate_sections(p: &Polarity, s: &RelS, t: &RelT) -> Result<SectionReport> {
    let mut report = SectionReport::default();
    if s.x_size != p.x_size() || s.y_size != p.y_size() {
        return Err(Error::DimensionMismatch {
            expected: p.x_size(),
            found: s.x_size,
        });
    }
    if t.x_size != p.x_size() || t.y_size != p.y_size() {
        return Err(Error::DimensionMismatch {
            expected: p.x_size(),
            found: t.x_size,
        });
    }

    for xs in all_tuples(p.x_size(), s.arity) {
        let section = s.row_section(&xs)?;
        let closed = p.close(Side::Y, &section)?;
        if let Some(w) = closed.first_not_in(&section) {
            report.violations.push(SectionViolation {
                section: SectionId::SRow { xs: xs.clone() },
                witness: w,
            });
        }
        for i in 0..s.arity {
            // canonical section key: slot i pinned to 0
            if xs[i] != 0 {
                continue;
            }
            for y in 0..p.y_size() {
                let col = s.column_section(&xs, i, y)?;
                let closed = p.close(Side::X, &col)?;
                if let Some(w) = closed.first_not_in(&col) {
                    report.violations.push(SectionViolation {
                        section: SectionId::SColumn {
                            xs: xs.clone(),
                            coord: i,
                            y,
                        },
                        witness: w,
                    });
                }
            }
        }
    }

    for x in 0..p.x_size() {
        for ys in all_tuples(p.y_size(), t.arity) {
            for i in 0..t.arity {
                if ys[i] != 0 {
                    continue;
                }
                let col = t.column_section(x, &ys, i)?;
                let closed = p.close(Side::Y, &col)?;
                if let Some(w) = closed.first_not_in(&col) {
                    report.violations.push(SectionViolation {
                        section: SectionId::TColumn {
                            x,
                            ys: ys.clone(),
                            coord: i,
                        },
                        witness: w,
                    });
                }
            }
        }
    }
    for ys in all_tuples(p.y_size(), t.arity) {
        let section = t.row_section(&ys)?;
        let closed = p.close(Side::X, &section)?;
        if let Some(w) = closed.first_not_in(&section) {
            report.violations.push(SectionViolation {
                section: SectionId::TRow { ys: ys.clone() },
                witness: w,
            });
        }
    }

    Ok(report)
}

/// A polarity with one n-ary relation `S` and one m-ary relation `T`, all
/// sections stable (validated at construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPolarity {
    base: Polarity,
    s: RelS,
    t: RelT,
}

impl OmegaPolarity {
    pub fn new(base: Polarity, s: RelS, t: RelT) -> Result<Self> {
        let report = validate_sections(&base, &s, &t)?;
        if !report.is_empty() {
            return Err(Error::NotStable);
        }
        Ok(OmegaPolarity { base, s, t })
    }

    pub fn base(&self) -> &Polarity {
        &self.base
    }

    pub fn s(&self) -> &RelS {
        &self.s
    }

    pub fn t(&self) -> &RelT {
        &self.t
    }

    pub fn n(&self) -> usize {
        self.s.arity
    }

    pub fn m(&self) -> usize {
        self.t.arity
    }

    fn check_stable_args(&self, args: &[BitSet], arity: usize) -> Result<()> {
        if args.len() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: args.len(),
            });
        }
        for a in args {
            if a.width() != self.base.x_size() {
                return Err(Error::DimensionMismatch {
                    expected: self.base.x_size(),
                    found: a.width(),
                });
            }
            if !self.base.is_stable(Side::X, a)? {
                return Err(Error::NotStable);
            }
        }
        Ok(())
    }

    /// `f•(A⃗) = {y : ∀x⃗ ∈ πA⃗, x⃗Sy}` — the intersection of row sections
    /// over the product; full `Y` when the product is empty.
    pub fn f_bullet(&self, args: &[BitSet]) -> Result<BitSet> {
        self.check_stable_args(args, self.s.arity)?;
        Ok(self.f_bullet_unchecked(args))
    }

    fn f_bullet_unchecked(&self, args: &[BitSet]) -> BitSet {
        eval_f_bullet(&self.base, &self.s, args)
    }

    /// `f_S(A⃗) = lam(f•(A⃗))` — a stable set, isotone in each coordinate.
    pub fn f_s(&self, args: &[BitSet]) -> Result<BitSet> {
        let bullet = self.f_bullet(args)?;
        self.base.lam(&bullet)
    }

    pub(crate) fn f_s_unchecked(&self, args: &[BitSet]) -> BitSet {
        eval_f_s(&self.base, &self.s, args)
    }

    /// `g_T(A⃗) = {x : ∀y⃗ ∈ π rho(A⃗), xTy⃗}` — intersection of row sections
    /// of `T` over the product of the derivations.
    pub fn g_t(&self, args: &[BitSet]) -> Result<BitSet> {
        self.check_stable_args(args, self.t.arity)?;
        Ok(self.g_t_unchecked(args))
    }

    pub(crate) fn g_t_unchecked(&self, args: &[BitSet]) -> BitSet {
        eval_g_t(&self.base, &self.t, args)
    }
}

/// `f•` evaluated directly over a raw (possibly unvalidated) relation.
pub fn eval_f_bullet(p: &Polarity, s: &RelS, args: &[BitSet]) -> BitSet {
    let members: Vec<Vec<usize>> = args.iter().map(|a| a.to_vec()).collect();
    let mut out = BitSet::full(p.y_size());
    for_each_product(&members, &mut |xs| {
        out.intersect_with(&s.row_section(xs).expect("in range"));
        true
    });
    out
}

pub fn eval_f_s(p: &Polarity, s: &RelS, args: &[BitSet]) -> BitSet {
    p.lam(&eval_f_bullet(p, s, args)).expect("widths agree")
}

pub fn eval_g_t(p: &Polarity, t: &RelT, args: &[BitSet]) -> BitSet {
    let members: Vec<Vec<usize>> = args
        .iter()
        .map(|a| p.rho(a).expect("widths agree").to_vec())
        .collect();
    let mut out = BitSet::full(p.x_size());
    for_each_product(&members, &mut |ys| {
        out.intersect_with(&t.row_section(ys).expect("in range"));
        true
    });
    out
}

/// A binary relation has stable sections in both of its readings. The
/// caller designates the slot explicitly, so coordinate order never flips
/// silently.
fn check_binary_sections(p: &Polarity, s: &RelS) -> Result<()> {
    if s.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: s.arity(),
        });
    }
    let t = s.as_rel_t()?;
    if !validate_sections(p, s, &t)?.is_empty() {
        return Err(Error::NotStable);
    }
    Ok(())
}

/// `◇ A = lam{y : ∀x∈A, xSy}` for a binary relation read on the S side.
pub fn diamond(p: &Polarity, s: &RelS, a: &BitSet) -> Result<BitSet> {
    check_binary_sections(p, s)?;
    if !p.is_stable(Side::X, a)? {
        return Err(Error::NotStable);
    }
    let mut ys = BitSet::empty(p.y_size());
    for y in 0..p.y_size() {
        if a.iter().all(|x| s.holds(&[x], y)) {
            ys.insert(y);
        }
    }
    p.lam(&ys)
}

/// `□ A = {x : ∀y ∈ rho(A), xTy}` for a binary relation read on the T side.
pub fn box_op(p: &Polarity, t: &RelT, a: &BitSet) -> Result<BitSet> {
    if t.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: t.arity(),
        });
    }
    check_binary_sections(p, &t.as_rel_s()?)?;
    if !p.is_stable(Side::X, a)? {
        return Err(Error::NotStable);
    }
    let rho = p.rho(a)?;
    let mut out = BitSet::empty(p.x_size());
    for x in 0..p.x_size() {
        if rho.iter().all(|y| t.holds(x, &[y])) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// The right adjoint of `A' ↦ f_S(A⃗[A'/i])`: intersection of the varying
/// column sections over the other coordinates and the derivation of slot `i`.
pub fn residual(op: &OmegaPolarity, args: &[BitSet], i: usize) -> Result<BitSet> {
    let n = op.s().arity();
    if args.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: args.len(),
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    for a in args {
        if !op.base().is_stable(Side::X, a)? {
            return Err(Error::NotStable);
        }
    }
    if op.base().x_size() == 0 {
        return Ok(BitSet::full(0));
    }
    let rho_i = op.base().rho(&args[i])?;
    // Slot i of the probe tuple is ignored by the varying section.
    let members: Vec<Vec<usize>> = (0..n)
        .map(|j| if j == i { vec![0] } else { args[j].to_vec() })
        .collect();
    let mut out = BitSet::full(op.base().x_size());
    for_each_product(&members, &mut |xs| {
        for y in rho_i.iter() {
            out.intersect_with(&op.s().column_section(xs, i, y).expect("in range"));
        }
        true
    });
    Ok(out)
}

/// `S_f = {(x⃗,y) : y ∈ rho(f(⟨x⃗⟩))}` for a validated complete normal
/// operator table `f` on the stable set lattice.
pub fn relation_from_operator(lat: &StableLattice, table: &OpTable) -> Result<RelS> {
    validate_operator_table(lat, table, true)?;
    let p = lat.polarity();
    let mut rel = RelS::empty(table.arity(), p.x_size(), p.y_size())?;
    for xs in all_tuples(p.x_size(), table.arity()) {
        let principal: Vec<usize> = xs
            .iter()
            .map(|&x| {
                let c = p.principal_stable(Side::X, x)?;
                lat.index_of(&c).ok_or(Error::NotStable)
            })
            .collect::<Result<_>>()?;
        let image = lat.element(table.get(&principal))?;
        let rho = p.rho(image)?;
        for y in rho.iter() {
            rel.insert(&xs, y);
        }
    }
    Ok(rel)
}

/// `T_g = {(x,y⃗) : x ∈ g(lam{y₀},…,lam{y_{m−1}})}` for a validated complete
/// normal dual operator table `g`.
pub fn relation_from_dual_operator(lat: &StableLattice, table: &OpTable) -> Result<RelT> {
    validate_operator_table(lat, table, false)?;
    let p = lat.polarity();
    let mut rel = RelT::empty(table.arity(), p.x_size(), p.y_size())?;
    for ys in all_tuples(p.y_size(), table.arity()) {
        let cols: Vec<usize> = ys
            .iter()
            .map(|&y| lat.index_of(p.col(y)).ok_or(Error::NotStable))
            .collect::<Result<_>>()?;
        let image = lat.element(table.get(&cols))?;
        for x in image.iter() {
            rel.insert(x, &ys);
        }
    }
    Ok(rel)
}

/// In a finite lattice, complete normality reduces to binary joins (meets)
/// plus the empty join (meet) in each coordinate; violations name the
/// coordinate and the offending triple.
fn validate_operator_table(lat: &StableLattice, table: &OpTable, joins: bool) -> Result<()> {
    if table.size() != lat.len() {
        return Err(Error::DimensionMismatch {
            expected: lat.len(),
            found: table.size(),
        });
    }
    let n = table.arity();
    let unit = if joins { lat.bottom() } else { lat.top() };
    for ctx in all_tuples(lat.len(), n) {
        for i in 0..n {
            if ctx[i] != 0 {
                continue; // slot i is replaced below; pin it once
            }
            let mut probe = ctx.clone();
            probe[i] = unit;
            if table.get(&probe) != unit {
                let witness = probe;
                return Err(if joins {
                    Error::NotNormalOperator { coord: i, witness }
                } else {
                    Error::NotNormalDualOperator { coord: i, witness }
                });
            }
            for b in 0..lat.len() {
                for c in 0..lat.len() {
                    let combined = if joins {
                        lat.join2(b, c)?
                    } else {
                        lat.meet2(b, c)?
                    };
                    probe[i] = combined;
                    let lhs = table.get(&probe);
                    probe[i] = b;
                    let vb = table.get(&probe);
                    probe[i] = c;
                    let vc = table.get(&probe);
                    let rhs = if joins {
                        lat.join2(vb, vc)?
                    } else {
                        lat.meet2(vb, vc)?
                    };
                    if lhs != rhs {
                        let mut witness = ctx.clone();
                        witness[i] = b;
                        witness.push(c);
                        return Err(if joins {
                            Error::NotNormalOperator { coord: i, witness }
                        } else {
                            Error::NotNormalDualOperator { coord: i, witness }
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Materializes the stable set lattice of an Ω-polarity together with the
/// operator tables of `f_S` and `g_T`, i.e. its dual algebra.
pub fn stable_nlo(op: &OmegaPolarity, cap: usize) -> Result<(StableLattice, OmegaNlo)> {
    let lat = crate::lattice::enumerate_stable_capped(op.base(), cap)?;
    let f = op_table_of(op, &lat, true)?;
    let g = op_table_of(op, &lat, false)?;
    let fl = FiniteLattice::from_stable_lattice(&lat)?;
    let nlo = OmegaNlo::new(fl, f, g)?;
    Ok((lat, nlo))
}

fn op_table_of(op: &OmegaPolarity, lat: &StableLattice, is_f: bool) -> Result<OpTable> {
    let arity = if is_f { op.n() } else { op.m() };
    let mut values = Vec::new();
    for idxs in all_tuples(lat.len(), arity) {
        let args: Vec<BitSet> = idxs
            .iter()
            .map(|&i| lat.element(i).cloned())
            .collect::<Result<_>>()?;
        let out = if is_f {
            op.f_s_unchecked(&args)
        } else {
            op.g_t_unchecked(&args)
        };
        values.push(lat.index_of(&out).ok_or(Error::NotStable)?);
    }
    OpTable::new(arity, lat.len(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::enumerate_stable;

    fn set(width: usize, elems: &[usize]) -> BitSet {
        BitSet::from_elements(width, elems)
    }

    #[test]
    fn section_examples() {
        let le2 = fixtures::le2();
        let s = RelS::from_polarity(&le2);
        assert_eq!(s.row_section(&[0]).unwrap(), set(2, &[0, 1]));
        let none = RelS::empty(1, 2, 2).unwrap();
        assert_eq!(none.row_section(&[1]).unwrap(), set(2, &[]));
        let all = RelS::full(2, 2, 2).unwrap();
        assert_eq!(all.column_section(&[0, 0], 1, 0).unwrap(), BitSet::full(2));
    }

    #[test]
    fn validate_sections_r_is_always_clean() {
        for (_, op) in fixtures::fixture_omegas() {
            let report = validate_sections(op.base(), op.s(), op.t()).unwrap();
            assert!(report.is_empty());
        }
    }

    #[test]
    fn validate_sections_flags_witnesses() {
        let le2 = fixtures::le2();
        let s = RelS::from_tuples(1, 2, 2, &[(vec![1], 1)]).unwrap();
        let t = RelT::from_polarity(&le2);
        let report = validate_sections(&le2, &s, &t).unwrap();
        // The column section at y=1 is {1} whose closure is {0,1}.
        assert!(report.violations.iter().any(|v| matches!(
            &v.section,
            SectionId::SColumn { coord: 0, y: 1, .. }
        ) && v.witness == 0));
        // The empty row section at x=0 closes to {1} on this polarity.
        assert!(report.violations.iter().any(|v| matches!(
            &v.section,
            SectionId::SRow { xs } if xs == &vec![0]
        ) && v.witness == 1));
    }

    #[test]
    fn empty_relations_are_clean_where_empty_is_stable() {
        for p in [fixtures::neq3(), fixtures::empty2()] {
            let s = RelS::empty(1, p.x_size(), p.y_size()).unwrap();
            let t = RelT::empty(1, p.x_size(), p.y_size()).unwrap();
            let report = validate_sections(&p, &s, &t).unwrap();
            assert!(report.is_empty());
        }
    }

    #[test]
    fn f_bullet_examples() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        assert_eq!(le2.f_bullet(&[set(2, &[0])]).unwrap(), set(2, &[0, 1]));
        // empty coordinate: vacuous product, full Y
        let neq3 = fixtures::with_r_relations(&fixtures::neq3());
        assert_eq!(neq3.f_bullet(&[set(3, &[])]).unwrap(), BitSet::full(3));
    }

    #[test]
    fn f_s_with_r_is_identity() {
        for (_, op) in fixtures::fixture_omegas() {
            let lat = enumerate_stable(op.base()).unwrap();
            for a in lat.elements() {
                assert_eq!(op.f_s(&[a.clone()]).unwrap(), *a);
                assert_eq!(op.g_t(&[a.clone()]).unwrap(), *a);
            }
        }
    }

    #[test]
    fn f_s_on_empty_coordinate_is_bottom() {
        let neq3 = fixtures::with_r_relations(&fixtures::neq3());
        let lat = enumerate_stable(neq3.base()).unwrap();
        let bottom = lat.element(lat.bottom()).unwrap().clone();
        assert_eq!(neq3.f_s(&[set(3, &[])]).unwrap(), bottom);
    }

    #[test]
    fn binary_full_relation_collapses() {
        // n=2 full relation: f_bullet is all of Y, so f_S is lam(Y) = bottom.
        let p = fixtures::neq3();
        let s = RelS::full(2, 3, 3).unwrap();
        let t = RelT::from_polarity(&p);
        let op = OmegaPolarity::new(p.clone(), s, t).unwrap();
        let lat = enumerate_stable(&p).unwrap();
        let bottom = lat.element(lat.bottom()).unwrap().clone();
        for a in lat.elements() {
            for b in lat.elements() {
                assert_eq!(op.f_s(&[a.clone(), b.clone()]).unwrap(), bottom);
            }
        }
    }

    #[test]
    fn unstable_argument_is_rejected() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        assert!(matches!(le2.f_s(&[set(2, &[1])]), Err(Error::NotStable)));
    }

    #[test]
    fn box_diamond_identity_on_le2() {
        let p = fixtures::le2();
        let s = RelS::from_polarity(&p);
        let t = RelT::from_polarity(&p);
        let lat = enumerate_stable(&p).unwrap();
        for a in lat.elements() {
            assert_eq!(diamond(&p, &s, a).unwrap(), *a);
            assert_eq!(box_op(&p, &t, a).unwrap(), *a);
        }
    }

    #[test]
    fn box_diamond_adjunction_with_empty_relation_on_neq3() {
        let p = fixtures::neq3();
        let s = RelS::empty(1, 3, 3).unwrap();
        let t = s.as_rel_t().unwrap();
        let lat = enumerate_stable(&p).unwrap();
        for a in lat.elements() {
            for b in lat.elements() {
                let dia = diamond(&p, &s, a).unwrap();
                let boxed = box_op(&p, &t, b).unwrap();
                assert_eq!(dia.is_subset(b), a.is_subset(&boxed));
            }
        }
        // least element maps below everything
        let bottom = lat.element(lat.bottom()).unwrap();
        let dia_bottom = diamond(&p, &s, bottom).unwrap();
        for b in lat.elements() {
            assert!(dia_bottom.is_subset(b));
        }
    }

    #[test]
    fn residual_identity_on_le2() {
        let op = fixtures::with_r_relations(&fixtures::le2());
        let lat = enumerate_stable(op.base()).unwrap();
        for b in lat.elements() {
            assert_eq!(residual(&op, &[b.clone()], 0).unwrap(), *b);
        }
    }

    #[test]
    fn residual_adjunction_full_binary_on_le2() {
        let p = fixtures::le2();
        let s = RelS::full(2, 2, 2).unwrap();
        let t = RelT::from_polarity(&p);
        let op = OmegaPolarity::new(p, s, t).unwrap();
        let lat = enumerate_stable(op.base()).unwrap();
        for i in 0..2 {
            for ctx in lat.elements() {
                for a in lat.elements() {
                    for b in lat.elements() {
                        let mut args = [ctx.clone(), ctx.clone()];
                        args[i] = a.clone();
                        let f = op.f_s(&args).unwrap();
                        let mut res_args = [ctx.clone(), ctx.clone()];
                        res_args[i] = b.clone();
                        let r = residual(&op, &res_args, i).unwrap();
                        assert_eq!(f.is_subset(b), a.is_subset(&r));
                    }
                }
            }
        }
    }

    #[test]
    fn residual_at_top_is_full() {
        let op = fixtures::with_r_relations(&fixtures::neq3());
        let top = BitSet::full(3);
        assert_eq!(residual(&op, &[top], 0).unwrap(), BitSet::full(3));
    }

    #[test]
    fn relation_from_identity_operator_recovers_r() {
        let p = fixtures::le2();
        let lat = enumerate_stable(&p).unwrap();
        let s = relation_from_operator(&lat, &OpTable::identity(lat.len())).unwrap();
        assert_eq!(s, RelS::from_polarity(&p));
        let t = relation_from_dual_operator(&lat, &OpTable::identity(lat.len())).unwrap();
        assert_eq!(t, RelT::from_polarity(&p));
    }

    #[test]
    fn relation_from_constant_bottom_is_full() {
        let p = fixtures::le2();
        let lat = enumerate_stable(&p).unwrap();
        let table = OpTable::constant(1, lat.len(), lat.bottom());
        let s = relation_from_operator(&lat, &table).unwrap();
        assert_eq!(s, RelS::full(1, 2, 2).unwrap());
    }

    #[test]
    fn relation_from_constant_top_dual_is_full() {
        let p = fixtures::le2();
        let lat = enumerate_stable(&p).unwrap();
        let table = OpTable::constant(1, lat.len(), lat.top());
        let t = relation_from_dual_operator(&lat, &table).unwrap();
        assert_eq!(t, RelT::full(1, 2, 2).unwrap());
    }

    #[test]
    fn non_normal_table_is_rejected_naming_a_join() {
        let p = fixtures::le2();
        let lat = enumerate_stable(&p).unwrap();
        // constant-top is not normal as an operator (empty join broken)
        let table = OpTable::constant(1, lat.len(), lat.top());
        assert!(matches!(
            relation_from_operator(&lat, &table),
            Err(Error::NotNormalOperator { coord: 0, .. })
        ));
    }

    #[test]
    fn roundtrip_relation_operator_relation_on_fixtures() {
        for (_, op) in fixtures::fixture_omegas() {
            let lat = enumerate_stable(op.base()).unwrap();
            let f = op_table_of(&op, &lat, true).unwrap();
            let s_back = relation_from_operator(&lat, &f).unwrap();
            assert_eq!(&s_back, op.s());
            let g = op_table_of(&op, &lat, false).unwrap();
            let t_back = relation_from_dual_operator(&lat, &g).unwrap();
            assert_eq!(&t_back, op.t());
        }
    }

    #[test]
    fn nullary_relations_give_constants() {
        let p = fixtures::neq3();
        // S ⊆ Y with one row section; pick a stable subset of Y: rho({0})
        let sec = p.rho(&set(3, &[0])).unwrap();
        let mut s = RelS::empty(0, 3, 3).unwrap();
        for y in sec.iter() {
            s.insert(&[], y);
        }
        let mut t = RelT::empty(0, 3, 3).unwrap();
        for x in p.lam(&sec).unwrap().iter() {
            t.insert(x, &[]);
        }
        let op = OmegaPolarity::new(p.clone(), s, t).unwrap();
        assert_eq!(op.f_s(&[]).unwrap(), p.lam(&sec).unwrap());
        assert_eq!(op.g_t(&[]).unwrap(), p.lam(&sec).unwrap());
    }
}
