//! Finite bounded lattices with a normal operator and dual operator, their
//! filters and ideals, the canonical (filter/ideal) structure, and the
//! embedding of a lattice into its double dual.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use crate::lattice::{StableLattice, DEFAULT_CAP};
use crate::omega::{all_tuples, OmegaPolarity, RelS, RelT};
use crate::polarity::Polarity;

/// A finite bounded lattice given by its order matrix, with meet/join
/// tables, bottom and top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: BitMatrix,
    meet: Vec<usize>,
    join: Vec<usize>,
    bot: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds the lattice from an order matrix, computing meet/join tables.
    /// Fails if the matrix is not a partial order or some pair lacks a
    /// greatest lower / least upper bound.
    pub fn from_leq(leq: BitMatrix) -> Result<Self> {
        let size = leq.row_count();
        if leq.col_count() != size {
            return Err(Error::NotLattice(String::from(
                "order matrix is not square",
            )));
        }
        if size == 0 {
            return Err(Error::NotLattice(String::from("empty carrier")));
        }
        if !leq.is_reflexive() {
            return Err(Error::NotLattice(String::from("order is not reflexive")));
        }
        if !leq.is_transitive() {
            return Err(Error::NotLattice(String::from("order is not transitive")));
        }
        if !leq.is_antisymmetric() {
            return Err(Error::NotLattice(String::from(
                "order is not antisymmetric",
            )));
        }
        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                meet[a * size + b] = Self::bound(&leq, a, b, true)
                    .ok_or_else(|| Error::NotLattice(format!("no meet for ({a},{b})")))?;
                join[a * size + b] = Self::bound(&leq, a, b, false)
                    .ok_or_else(|| Error::NotLattice(format!("no join for ({a},{b})")))?;
            }
        }
        let bot = (0..size)
            .find(|&c| (0..size).all(|d| leq.get(c, d)))
            .ok_or_else(|| Error::NotLattice(String::from("no least element")))?;
        let top = (0..size)
            .find(|&c| (0..size).all(|d| leq.get(d, c)))
            .ok_or_else(|| Error::NotLattice(String::from("no greatest element")))?;
        Ok(FiniteLattice {
            size,
            leq,
            meet,
            join,
            bot,
            top,
        })
    }

    fn bound(leq: &BitMatrix, a: usize, b: usize, lower: bool) -> Option<usize> {
        let size = leq.row_count();
        let cands: Vec<usize> = (0..size)
            .filter(|&c| {
                if lower {
                    leq.get(c, a) && leq.get(c, b)
                } else {
                    leq.get(a, c) && leq.get(b, c)
                }
            })
            .collect();
        cands.iter().copied().find(|&c| {
            cands
                .iter()
                .all(|&d| if lower { leq.get(d, c) } else { leq.get(c, d) })
        })
    }

    /// Builds from precomputed parts without the O(n³) bound search; the
    /// caller guarantees the tables are correct (used for products and
    /// stable-set lattices, where they come from set algebra).
    pub(crate) fn from_parts(
        leq: BitMatrix,
        meet: Vec<usize>,
        join: Vec<usize>,
        bot: usize,
        top: usize,
    ) -> Self {
        let size = leq.row_count();
        FiniteLattice {
            size,
            leq,
            meet,
            join,
            bot,
            top,
        }
    }

    pub fn from_stable_lattice(lat: &StableLattice) -> Result<Self> {
        let n = lat.len();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                meet.push(lat.meet2(a, b)?);
                join.push(lat.join2(a, b)?);
            }
        }
        Ok(Self::from_parts(
            lat.order_matrix().clone(),
            meet,
            join,
            lat.bottom(),
            lat.top(),
        ))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    pub fn order_matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet_family(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items
            .into_iter()
            .fold(self.top, |acc, i| self.meet2(acc, i))
    }

    pub fn join_family(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items
            .into_iter()
            .fold(self.bot, |acc, i| self.join2(acc, i))
    }

    /// Up-closure of `{a}` as a bitset: the principal filter `[a)`.
    pub fn upset(&self, a: usize) -> BitSet {
        self.leq.row(a).clone()
    }

    /// Down-closure of `{a}`: the principal ideal `(a]`.
    pub fn downset(&self, a: usize) -> BitSet {
        let mut s = BitSet::empty(self.size);
        for b in 0..self.size {
            if self.leq.get(b, a) {
                s.insert(b);
            }
        }
        s
    }
}

/// A law violation found by one of the validators: the law's name and the
/// first counterexample in scan order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push_once(&mut self, law: &'static str, witness: Vec<usize>) {
        if !self.violations.iter().any(|v| v.law == law) {
            self.violations.push(Violation { law, witness });
        }
    }
}

/// Checks that the stored meet/join tables, bounds and order agree.
pub fn validate_lattice(l: &FiniteLattice) -> Report {
    let mut report = Report::default();
    if !l.leq.is_reflexive() {
        report.push_once("reflexive", vec![]);
    }
    if !l.leq.is_transitive() {
        report.push_once("transitive", vec![]);
    }
    if !l.leq.is_antisymmetric() {
        report.push_once("antisymmetric", vec![]);
    }
    for a in 0..l.size {
        if !l.leq(l.bot, a) {
            report.push_once("bottom", vec![a]);
        }
        if !l.leq(a, l.top) {
            report.push_once("top", vec![a]);
        }
        for b in 0..l.size {
            let m = l.meet2(a, b);
            let glb = FiniteLattice::bound(&l.leq, a, b, true);
            if glb != Some(m) {
                report.push_once("meet-is-glb", vec![a, b]);
            }
            let j = l.join2(a, b);
            let lub = FiniteLattice::bound(&l.leq, a, b, false);
            if lub != Some(j) {
                report.push_once("join-is-lub", vec![a, b]);
            }
        }
    }
    report
}

/// An n-ary operation table over lattice element indices, flattened in
/// mixed radix with coordinate 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    arity: usize,
    size: usize,
    values: Vec<usize>,
}

impl OpTable {
    pub fn new(arity: usize, size: usize, values: Vec<usize>) -> Result<Self> {
        let mut expected: usize = 1;
        for _ in 0..arity {
            expected = expected
                .checked_mul(size)
                .ok_or(Error::CapacityExceeded { cap: usize::MAX })?;
        }
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        for &v in &values {
            if v >= size {
                return Err(Error::IndexOutOfRange { index: v, size });
            }
        }
        Ok(OpTable {
            arity,
            size,
            values,
        })
    }

    pub fn from_fn(
        arity: usize,
        size: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let values = all_tuples(size, arity).iter().map(|t| f(t)).collect();
        Self::new(arity, size, values)
    }

    pub fn identity(size: usize) -> Self {
        OpTable {
            arity: 1,
            size,
            values: (0..size).collect(),
        }
    }

    pub fn constant(arity: usize, size: usize, value: usize) -> Self {
        let len = size.pow(arity as u32);
        OpTable {
            arity,
            size,
            values: vec![value; len],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * self.size + a);
        self.values[idx]
    }
}

/// Binary joins and bottom, per coordinate. Finite carriers make this
/// equivalent to complete normality.
pub fn is_normal_operator(l: &FiniteLattice, f: &OpTable) -> Report {
    operator_report(l, f, true)
}

pub fn is_normal_dual_operator(l: &FiniteLattice, g: &OpTable) -> Report {
    operator_report(l, g, false)
}

fn operator_report(l: &FiniteLattice, f: &OpTable, joins: bool) -> Report {
    let mut report = Report::default();
    if f.size != l.size {
        report.push_once("table-shape", vec![f.size, l.size]);
        return report;
    }
    let unit = if joins { l.bot } else { l.top };
    let unit_law: &'static str = if joins {
        "preserves-bottom"
    } else {
        "preserves-top"
    };
    let comb_law: &'static str = if joins {
        "preserves-binary-joins"
    } else {
        "preserves-binary-meets"
    };
    for ctx in all_tuples(l.size, f.arity) {
        for i in 0..f.arity {
            if ctx[i] != 0 {
                continue;
            }
            let mut probe = ctx.clone();
            probe[i] = unit;
            if f.get(&probe) != unit {
                let mut w = probe.clone();
                w.push(i);
                report.push_once(unit_law, w);
            }
            for b in 0..l.size {
                for c in b..l.size {
                    let comb = if joins { l.join2(b, c) } else { l.meet2(b, c) };
                    probe[i] = comb;
                    let lhs = f.get(&probe);
                    probe[i] = b;
                    let vb = f.get(&probe);
                    probe[i] = c;
                    let vc = f.get(&probe);
                    let rhs = if joins {
                        l.join2(vb, vc)
                    } else {
                        l.meet2(vb, vc)
                    };
                    if lhs != rhs {
                        let mut w = ctx.clone();
                        w[i] = b;
                        w.push(c);
                        w.push(i);
                        report.push_once(comb_law, w);
                    }
                }
            }
        }
    }
    report
}

/// A finite bounded lattice with one normal operator and one normal dual
/// operator; validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaNlo {
    lattice: FiniteLattice,
    f: OpTable,
    g: OpTable,
}

impl OmegaNlo {
    pub fn new(lattice: FiniteLattice, f: OpTable, g: OpTable) -> Result<Self> {
        let rf = is_normal_operator(&lattice, &f);
        if let Some(v) = rf.violations.first() {
            return Err(Error::NotNormalOperator {
                coord: 0,
                witness: v.witness.clone(),
            });
        }
        let rg = is_normal_dual_operator(&lattice, &g);
        if let Some(v) = rg.violations.first() {
            return Err(Error::NotNormalDualOperator {
                coord: 0,
                witness: v.witness.clone(),
            });
        }
        Ok(OmegaNlo { lattice, f, g })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn f(&self) -> &OpTable {
        &self.f
    }

    pub fn g(&self) -> &OpTable {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.f.arity
    }

    pub fn m(&self) -> usize {
        self.g.arity
    }
}

/// A nonempty filter, stored extensionally with its generator cached.
/// In a finite lattice every nonempty filter is the up-closure of its
/// minimum, so `filters` enumerates `[a)` by generator index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterSet {
    pub elements: BitSet,
    pub generator: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSet {
    pub elements: BitSet,
    pub generator: usize,
}

pub fn filters(l: &FiniteLattice) -> Vec<FilterSet> {
    (0..l.size)
        .map(|a| FilterSet {
            elements: l.upset(a),
            generator: a,
        })
        .collect()
}

pub fn ideals(l: &FiniteLattice) -> Vec<IdealSet> {
    (0..l.size)
        .map(|a| IdealSet {
            elements: l.downset(a),
            generator: a,
        })
        .collect()
}

pub fn is_filter(l: &FiniteLattice, s: &BitSet) -> bool {
    if s.width() != l.size || s.is_empty() {
        return false;
    }
    let up_closed = s.iter().all(|a| l.upset(a).is_subset(s));
    let meet_closed = s
        .iter()
        .all(|a| s.iter().all(|b| s.contains(l.meet2(a, b))));
    up_closed && meet_closed
}

pub fn is_ideal(l: &FiniteLattice, s: &BitSet) -> bool {
    if s.width() != l.size || s.is_empty() {
        return false;
    }
    let down_closed = s.iter().all(|a| l.downset(a).is_subset(s));
    let join_closed = s
        .iter()
        .all(|a| s.iter().all(|b| s.contains(l.join2(a, b))));
    down_closed && join_closed
}

/// The polarity of nonempty filters against nonempty ideals under the
/// overlap relation. Both carriers are indexed by generator, so carrier
/// index `a` is the filter `[a)` resp. the ideal `(a]`.
pub fn canonical_polarity(l: &FiniteLattice) -> Polarity {
    let fs = filters(l);
    let is = ideals(l);
    Polarity::from_fn(fs.len(), is.len(), |a, b| {
        !fs[a].elements.is_disjoint(&is[b].elements)
    })
}

/// The canonical structure: the filter/ideal polarity together with the
/// relations induced by `f` (pick members of the filters whose image lands
/// in the ideal) and `g` (dually).
pub fn canonical_structure(a: &OmegaNlo) -> Result<OmegaPolarity> {
    let l = &a.lattice;
    let fs = filters(l);
    let is = ideals(l);
    let base = canonical_polarity(l);

    let mut s = RelS::empty(a.n(), fs.len(), is.len())?;
    for ftuple in all_tuples(fs.len(), a.n()) {
        let members: Vec<Vec<usize>> = ftuple.iter().map(|&fi| fs[fi].elements.to_vec()).collect();
        for (di, ideal) in is.iter().enumerate() {
            if product_hits(&members, |args| ideal.elements.contains(a.f.get(args))) {
                s.insert(&ftuple, di);
            }
        }
    }

    let mut t = RelT::empty(a.m(), fs.len(), is.len())?;
    for dtuple in all_tuples(is.len(), a.m()) {
        let members: Vec<Vec<usize>> = dtuple.iter().map(|&di| is[di].elements.to_vec()).collect();
        for (fi, filter) in fs.iter().enumerate() {
            if product_hits(&members, |args| filter.elements.contains(a.g.get(args))) {
                t.insert(fi, &dtuple);
            }
        }
    }

    OmegaPolarity::new(base, s, t)
}

/// Does some tuple in the product of `members` satisfy `pred`?
fn product_hits(members: &[Vec<usize>], mut pred: impl FnMut(&[usize]) -> bool) -> bool {
    let mut found = false;
    crate::omega::for_each_product(members, &mut |t| {
        if pred(t) {
            found = true;
            return false;
        }
        true
    });
    found
}

/// A homomorphism between NLOs, carried with its endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: OmegaNlo,
    pub target: OmegaNlo,
    pub map: Vec<usize>,
}

/// Order, bounds, binary meets/joins, and both operators.
pub fn is_homomorphism(h: &Homomorphism) -> Report {
    let mut report = Report::default();
    let l = &h.source.lattice;
    let m = &h.target.lattice;
    if h.map.len() != l.size {
        report.push_once("map-shape", vec![h.map.len(), l.size]);
        return report;
    }
    if h.map.iter().any(|&v| v >= m.size) {
        report.push_once("map-range", vec![]);
        return report;
    }
    if h.source.n() != h.target.n() || h.source.m() != h.target.m() {
        report.push_once("operator-arities", vec![]);
        return report;
    }
    for a in 0..l.size {
        for b in 0..l.size {
            if l.leq(a, b) && !m.leq(h.map[a], h.map[b]) {
                report.push_once("order", vec![a, b]);
            }
            if h.map[l.meet2(a, b)] != m.meet2(h.map[a], h.map[b]) {
                report.push_once("meet", vec![a, b]);
            }
            if h.map[l.join2(a, b)] != m.join2(h.map[a], h.map[b]) {
                report.push_once("join", vec![a, b]);
            }
        }
    }
    if h.map[l.bot()] != m.bot() {
        report.push_once("bottom", vec![]);
    }
    if h.map[l.top()] != m.top() {
        report.push_once("top", vec![]);
    }
    for args in all_tuples(l.size, h.source.n()) {
        let mapped: Vec<usize> = args.iter().map(|&a| h.map[a]).collect();
        if h.map[h.source.f.get(&args)] != h.target.f.get(&mapped) {
            report.push_once("operator-f", args.clone());
        }
    }
    for args in all_tuples(l.size, h.source.m()) {
        let mapped: Vec<usize> = args.iter().map(|&a| h.map[a]).collect();
        if h.map[h.source.g.get(&args)] != h.target.g.get(&mapped) {
            report.push_once("operator-g", args.clone());
        }
    }
    report
}

/// Diagnostics of the embedding of a lattice into its double dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaDiagnostics {
    pub injective: bool,
    pub lattice_hom: bool,
    pub preserves_f: bool,
    pub preserves_g: bool,
    pub dense: bool,
    pub compact: bool,
    pub surjective: bool,
}

impl ThetaDiagnostics {
    /// The completion laws; surjectivity is the finite-case bonus and is
    /// reported separately.
    pub fn all_pass(&self) -> bool {
        self.injective
            && self.lattice_hom
            && self.preserves_f
            && self.preserves_g
            && self.dense
            && self.compact
    }
}

/// The embedding `a ↦ {F : a ∈ F}` of an NLO into the stable set lattice of
/// its canonical structure, with its diagnostics.
#[derive(Clone, Debug)]
pub struct ThetaEmbedding {
    pub canonical: OmegaPolarity,
    pub lattice: StableLattice,
    pub double_dual: OmegaNlo,
    pub map: Vec<usize>,
    pub diagnostics: ThetaDiagnostics,
}

pub fn theta_embedding(a: &OmegaNlo) -> Result<ThetaEmbedding> {
    theta_embedding_capped(a, DEFAULT_CAP, u64::MAX)
}

/// `sample_seed` drives the sampled compactness check for lattices with
/// more than twelve elements; below that the check is exhaustive.
pub fn theta_embedding_capped(
    a: &OmegaNlo,
    cap: usize,
    sample_seed: u64,
) -> Result<ThetaEmbedding> {
    let canonical = canonical_structure(a)?;
    let (lat, dd) = crate::omega::stable_nlo(&canonical, cap)?;
    let l = &a.lattice;

    // θ(e) = the set of filters containing e = the down-set of e in
    // generator indexing.
    let mut map = Vec::with_capacity(l.size);
    for e in 0..l.size {
        let theta_e = l.downset(e);
        map.push(lat.index_of(&theta_e).ok_or(Error::NotStable)?);
    }

    let injective = {
        let mut seen = BTreeMap::new();
        map.iter().all(|&v| seen.insert(v, ()).is_none())
    };

    let ddl = dd.lattice();
    let mut lattice_hom = map[l.bot()] == ddl.bot() && map[l.top()] == ddl.top();
    'hom: for x in 0..l.size {
        for y in 0..l.size {
            if map[l.meet2(x, y)] != ddl.meet2(map[x], map[y])
                || map[l.join2(x, y)] != ddl.join2(map[x], map[y])
            {
                lattice_hom = false;
                break 'hom;
            }
        }
    }

    let preserves_f = all_tuples(l.size, a.n()).iter().all(|args| {
        let mapped: Vec<usize> = args.iter().map(|&e| map[e]).collect();
        map[a.f.get(args)] == dd.f().get(&mapped)
    });
    let preserves_g = all_tuples(l.size, a.m()).iter().all(|args| {
        let mapped: Vec<usize> = args.iter().map(|&e| map[e]).collect();
        map[a.g.get(args)] == dd.g().get(&mapped)
    });

    let closed = closure_under(ddl, &map, true);
    let open = closure_under(ddl, &map, false);
    let dense = (0..ddl.size()).all(|c| {
        let from_closed = ddl.join_family(closed.iter().filter(|&&k| ddl.leq(k, c)).copied());
        let from_open = ddl.meet_family(open.iter().filter(|&&o| ddl.leq(c, o)).copied());
        from_closed == c && from_open == c
    });

    let compact = check_compactness(l, ddl, &map, sample_seed);

    let surjective = {
        let mut hit = vec![false; ddl.size()];
        for &v in &map {
            hit[v] = true;
        }
        hit.iter().all(|&h| h)
    };

    Ok(ThetaEmbedding {
        canonical,
        lattice: lat,
        double_dual: dd,
        map,
        diagnostics: ThetaDiagnostics {
            injective,
            lattice_hom,
            preserves_f,
            preserves_g,
            dense,
            compact,
            surjective,
        },
    })
}

/// All meets (`meets = true`) or joins of subsets of the image, i.e. the
/// closed resp. open elements of the completion.
fn closure_under(l: &FiniteLattice, image: &[usize], meets: bool) -> Vec<usize> {
    let mut member = vec![false; l.size()];
    let mut worklist: Vec<usize> = Vec::new();
    let unit = if meets { l.top() } else { l.bot() };
    for &v in image.iter().chain(core::iter::once(&unit)) {
        if !member[v] {
            member[v] = true;
            worklist.push(v);
        }
    }
    loop {
        let mut added = false;
        let current: Vec<usize> = (0..l.size()).filter(|&i| member[i]).collect();
        for &a in &current {
            for &b in &current {
                let c = if meets { l.meet2(a, b) } else { l.join2(a, b) };
                if !member[c] {
                    member[c] = true;
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    (0..l.size()).filter(|&i| member[i]).collect()
}

/// For any subsets Z, W of L with `⋀θ[Z] ≤ ⋁θ[W]` in the double dual there
/// must be finite witnesses below; over a finite lattice the whole sets
/// qualify, so the check is `⋀Z ≤ ⋁W` back in L. Exhaustive up to 12
/// elements, seeded sampling above.
fn check_compactness(l: &FiniteLattice, ddl: &FiniteLattice, map: &[usize], seed: u64) -> bool {
    let n = l.size();
    let check_pair = |zmask: u64, wmask: u64| -> bool {
        let zs = (0..n).filter(|&i| zmask >> i & 1 == 1);
        let ws = (0..n).filter(|&i| wmask >> i & 1 == 1);
        let meet_dd = ddl.meet_family(zs.clone().map(|i| map[i]));
        let join_dd = ddl.join_family(ws.clone().map(|i| map[i]));
        if ddl.leq(meet_dd, join_dd) {
            let meet_l = l.meet_family(zs);
            let join_l = l.join_family(ws);
            l.leq(meet_l, join_l)
        } else {
            true
        }
    };
    if n <= 12 {
        let total = 1u64 << n;
        for zmask in 0..total {
            for wmask in 0..total {
                if !check_pair(zmask, wmask) {
                    return false;
                }
            }
        }
        true
    } else {
        let mut rng = crate::rng::SplitMix64::new(seed);
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        (0..4096).all(|_| check_pair(rng.next_u64() & mask, rng.next_u64() & mask))
    }
}

/// Evaluates the lower canonical extension of `f` on the double dual: on
/// tuples of closed elements it is the meet of the images of elements
/// dominating the tuple, and in general the join over closed tuples below.
pub fn lower_extension(a: &OmegaNlo, theta: &ThetaEmbedding) -> Result<OpTable> {
    extension_table(a, theta, true)
}

/// The upper canonical extension of `g`, dual construction over opens.
pub fn upper_extension(a: &OmegaNlo, theta: &ThetaEmbedding) -> Result<OpTable> {
    extension_table(a, theta, false)
}

fn extension_table(a: &OmegaNlo, theta: &ThetaEmbedding, lower: bool) -> Result<OpTable> {
    let l = &a.lattice;
    let ddl = theta.double_dual.lattice();
    let map = &theta.map;
    let arity = if lower { a.n() } else { a.m() };
    let special = closure_under(ddl, map, lower);
    let l_tuples = all_tuples(l.size, arity);

    // value on a tuple of closed (resp. open) elements
    let mut on_special: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for ptuple in all_tuples_from(&special, arity) {
        let keep = |atuple: &Vec<usize>| {
            ptuple.iter().zip(atuple).all(|(&p, &e)| {
                if lower {
                    ddl.leq(p, map[e])
                } else {
                    ddl.leq(map[e], p)
                }
            })
        };
        let images = l_tuples.iter().filter(|t| keep(t)).map(|t| {
            if lower {
                map[a.f.get(t)]
            } else {
                map[a.g.get(t)]
            }
        });
        let v = if lower {
            ddl.meet_family(images)
        } else {
            ddl.join_family(images)
        };
        on_special.insert(ptuple, v);
    }

    let mut values = Vec::new();
    for xtuple in all_tuples(ddl.size(), arity) {
        let mut acc = if lower { ddl.bot() } else { ddl.top() };
        for (ptuple, &v) in &on_special {
            let dominated =
                ptuple.iter().zip(&xtuple).all(
                    |(&p, &x)| {
                        if lower {
                            ddl.leq(p, x)
                        } else {
                            ddl.leq(x, p)
                        }
                    },
                );
            if dominated {
                acc = if lower {
                    ddl.join2(acc, v)
                } else {
                    ddl.meet2(acc, v)
                };
            }
        }
        values.push(acc);
    }
    OpTable::new(arity, ddl.size(), values)
}

fn all_tuples_from(pool: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let members: Vec<Vec<usize>> = (0..arity).map(|_| pool.to_vec()).collect();
    crate::omega::for_each_product(&members, &mut |t| {
        out.push(t.to_vec());
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_lattices_validate() {
        for (_, l) in fixtures::fixture_lattices() {
            assert!(validate_lattice(&l).is_empty());
        }
        assert!(validate_lattice(&fixtures::one()).is_empty());
    }

    #[test]
    fn identity_is_normal_both_ways() {
        let l = fixtures::ch2();
        assert!(is_normal_operator(&l, &OpTable::identity(2)).is_empty());
        assert!(is_normal_dual_operator(&l, &OpTable::identity(2)).is_empty());
    }

    #[test]
    fn constant_top_operator_breaks_normality() {
        let l = fixtures::n5();
        let f = OpTable::constant(1, 5, l.top());
        let report = is_normal_operator(&l, &f);
        assert!(report
            .violations
            .iter()
            .any(|v| v.law == "preserves-bottom"));
        // construction rejects it outright
        assert!(OmegaNlo::new(l.clone(), f, OpTable::identity(5)).is_err());
    }

    #[test]
    fn swap_is_not_a_homomorphism() {
        let l = fixtures::ch2();
        let h = Homomorphism {
            source: fixtures::identity_nlo(l.clone()),
            target: fixtures::identity_nlo(l),
            map: vec![1, 0],
        };
        let report = is_homomorphism(&h);
        assert!(report.violations.iter().any(|v| v.law == "order"));
    }

    #[test]
    fn filters_and_ideals_examples() {
        let l = fixtures::ch2();
        let fs = filters(&l);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].elements.to_vec(), vec![0, 1]); // [0)
        assert_eq!(fs[1].elements.to_vec(), vec![1]); // [1)
        let is = ideals(&l);
        assert_eq!(is[0].elements.to_vec(), vec![0]); // (0]
        assert_eq!(is[1].elements.to_vec(), vec![0, 1]); // (1]

        assert_eq!(filters(&fixtures::one()).len(), 1);
        assert_eq!(ideals(&fixtures::one()).len(), 1);
        assert_eq!(filters(&fixtures::n5()).len(), 5);
        assert_eq!(ideals(&fixtures::n5()).len(), 5);
    }

    #[test]
    fn canonical_structure_of_ch2() {
        let a = fixtures::identity_nlo(fixtures::ch2());
        let cs = canonical_structure(&a).unwrap();
        // Overlap holds exactly when generator(F) ≤ generator(D).
        let expect = [(0, 0), (0, 1), (1, 1)];
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(cs.base().relates(x, y), expect.contains(&(x, y)));
                assert_eq!(cs.s().holds(&[x], y), expect.contains(&(x, y)));
                assert_eq!(cs.t().holds(x, &[y]), expect.contains(&(x, y)));
            }
        }
    }

    #[test]
    fn canonical_structure_of_one_element() {
        let a = fixtures::identity_nlo(fixtures::one());
        let cs = canonical_structure(&a).unwrap();
        assert!(cs.base().relates(0, 0));
        assert!(cs.s().holds(&[0], 0));
        assert!(cs.t().holds(0, &[0]));
    }

    #[test]
    fn canonical_overlap_is_the_generator_order() {
        // [a) meets (b] exactly when a ≤ b
        for (_, l) in fixtures::fixture_lattices() {
            let a = fixtures::identity_nlo(l.clone());
            let cs = canonical_structure(&a).unwrap();
            for x in 0..l.size() {
                for y in 0..l.size() {
                    assert_eq!(cs.base().relates(x, y), l.leq(x, y));
                }
            }
        }
    }

    #[test]
    fn sampled_compactness_on_a_long_chain() {
        // thirteen elements force the seeded compactness path
        let a = fixtures::identity_nlo(fixtures::chain(13));
        let theta = theta_embedding_capped(&a, crate::lattice::DEFAULT_CAP, 7).unwrap();
        assert!(theta.diagnostics.all_pass());
        assert!(theta.diagnostics.surjective);
        assert_eq!(theta.lattice.len(), 13);
    }

    #[test]
    fn canonical_quasi_orders_are_inclusion() {
        use crate::polarity::Side;
        for (_, l) in fixtures::fixture_lattices() {
            let a = fixtures::identity_nlo(l.clone());
            let cs = canonical_structure(&a).unwrap();
            let fs = filters(&l);
            let is = ideals(&l);
            let q1 = cs.base().quasi_order(Side::X);
            for a1 in 0..fs.len() {
                for b1 in 0..fs.len() {
                    assert_eq!(
                        q1.holds(a1, b1),
                        fs[a1].elements.is_subset(&fs[b1].elements)
                    );
                }
            }
            let q2 = cs.base().quasi_order(Side::Y);
            for a1 in 0..is.len() {
                for b1 in 0..is.len() {
                    assert_eq!(
                        q2.holds(a1, b1),
                        is[a1].elements.is_subset(&is[b1].elements)
                    );
                }
            }
        }
    }

    #[test]
    fn theta_is_an_isomorphism_on_fixtures() {
        for (_, l) in fixtures::fixture_lattices() {
            let size = l.size();
            let a = fixtures::identity_nlo(l);
            let theta = theta_embedding(&a).unwrap();
            assert!(theta.diagnostics.all_pass());
            assert!(theta.diagnostics.surjective);
            assert_eq!(theta.lattice.len(), size);
        }
        let a = fixtures::identity_nlo(fixtures::one());
        let theta = theta_embedding(&a).unwrap();
        assert_eq!(theta.lattice.len(), 1);
        assert_eq!(theta.map, vec![0]);
    }

    #[test]
    fn extensions_equal_induced_operators_on_fixtures() {
        for (_, l) in fixtures::fixture_lattices() {
            let a = fixtures::identity_nlo(l);
            let theta = theta_embedding(&a).unwrap();
            let lower = lower_extension(&a, &theta).unwrap();
            assert_eq!(&lower, theta.double_dual.f());
            let upper = upper_extension(&a, &theta).unwrap();
            assert_eq!(&upper, theta.double_dual.g());
        }
    }
}
