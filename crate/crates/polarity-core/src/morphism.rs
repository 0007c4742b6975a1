//! Bounded morphisms between Ω-polarities: certification with witnesses,
//! composition, dual homomorphisms, isomorphisms, inner substructures and
//! images, duals of NLO homomorphisms, and maximal covering detection.
//!
//! A bounded morphism is a pair of isotone carrier maps with one reflection
//! (back) condition and one or two bounded-quantifier (forth) conditions for
//! each of R, S, T. Forth conditions are evaluated twice, once directly and
//! once in contrapositive witness-searching form; the two evaluators must
//! agree or the checker itself is broken.
//!
//! For a single symmetric carrier relation these conditions mirror the
//! classical Kripke-frame back-and-forth conditions read through the
//! complement of the relation; no translation is implemented here since the
//! higher-arity relations admit no canonical transform.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::lattice::enumerate_stable_capped;
use crate::nlo::{
    canonical_structure, filters, ideals, is_filter, is_homomorphism, is_ideal, FiniteLattice,
    Homomorphism, OmegaNlo,
};
use crate::omega::{all_tuples, stable_nlo, OmegaPolarity, RelS, RelT};
use crate::polarity::{QuasiOrder, Side};

/// A pair of carrier maps between two Ω-polarities. Plain data; whether it
/// is a bounded morphism is decided by [`verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedMorphism {
    pub source: OmegaPolarity,
    pub target: OmegaPolarity,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

impl BoundedMorphism {
    pub fn new(
        source: OmegaPolarity,
        target: OmegaPolarity,
        alpha: Vec<usize>,
        beta: Vec<usize>,
    ) -> Result<Self> {
        if alpha.len() != source.base().x_size() {
            return Err(Error::DimensionMismatch {
                expected: source.base().x_size(),
                found: alpha.len(),
            });
        }
        if beta.len() != source.base().y_size() {
            return Err(Error::DimensionMismatch {
                expected: source.base().y_size(),
                found: beta.len(),
            });
        }
        for &v in &alpha {
            if v >= target.base().x_size() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: target.base().x_size(),
                });
            }
        }
        for &v in &beta {
            if v >= target.base().y_size() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: target.base().y_size(),
                });
            }
        }
        if source.n() != target.n() {
            return Err(Error::ArityMismatch {
                expected: target.n(),
                found: source.n(),
            });
        }
        if source.m() != target.m() {
            return Err(Error::ArityMismatch {
                expected: target.m(),
                found: source.m(),
            });
        }
        Ok(BoundedMorphism {
            source,
            target,
            alpha,
            beta,
        })
    }

    pub fn alpha_image(&self) -> BitSet {
        let mut s = BitSet::empty(self.target.base().x_size());
        for &v in &self.alpha {
            s.insert(v);
        }
        s
    }

    pub fn beta_image(&self) -> BitSet {
        let mut s = BitSet::empty(self.target.base().y_size());
        for &v in &self.beta {
            s.insert(v);
        }
        s
    }

    pub fn alpha_preimage(&self, a: &BitSet) -> BitSet {
        let mut s = BitSet::empty(self.alpha.len());
        for (x, &v) in self.alpha.iter().enumerate() {
            if a.contains(v) {
                s.insert(x);
            }
        }
        s
    }

    pub fn beta_preimage(&self, b: &BitSet) -> BitSet {
        let mut s = BitSet::empty(self.beta.len());
        for (y, &v) in self.beta.iter().enumerate() {
            if b.contains(v) {
                s.insert(y);
            }
        }
        s
    }
}

/// One checked condition: pass, or the first failing tuple in scan order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Vec<usize>),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// Per-condition verdicts for one candidate morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCertificate {
    pub isotone_alpha: Verdict,
    pub isotone_beta: Verdict,
    /// target relation pulled back: `α(x) R' β(y) ⟹ x R y`
    pub back_r: Verdict,
    /// `(α⁻¹[x')₁) R y ⟹ x' R' β(y)`
    pub forth_r_x: Verdict,
    /// `x R (β⁻¹[y')₂) ⟹ α(x) R' y'`
    pub forth_r_y: Verdict,
    pub back_s: Verdict,
    pub forth_s: Verdict,
    pub back_t: Verdict,
    pub forth_t: Verdict,
}

impl MorphismCertificate {
    pub fn all_pass(&self) -> bool {
        self.conditions().iter().all(|(_, v)| v.passed())
    }

    pub fn conditions(&self) -> [(&'static str, &Verdict); 9] {
        [
            ("isotone_alpha", &self.isotone_alpha),
            ("isotone_beta", &self.isotone_beta),
            ("back_r", &self.back_r),
            ("forth_r_x", &self.forth_r_x),
            ("forth_r_y", &self.forth_r_y),
            ("back_s", &self.back_s),
            ("forth_s", &self.forth_s),
            ("back_t", &self.back_t),
            ("forth_t", &self.forth_t),
        ]
    }
}

struct Orders {
    src_x: QuasiOrder,
    src_y: QuasiOrder,
    dst_x: QuasiOrder,
    dst_y: QuasiOrder,
}

fn orders(m: &BoundedMorphism) -> Orders {
    Orders {
        src_x: m.source.base().quasi_order(Side::X),
        src_y: m.source.base().quasi_order(Side::Y),
        dst_x: m.target.base().quasi_order(Side::X),
        dst_y: m.target.base().quasi_order(Side::Y),
    }
}

/// Evaluates all nine conditions. Forth conditions are double-checked in
/// contrapositive form; disagreement would mean the checker is buggy.
pub fn verify(m: &BoundedMorphism) -> MorphismCertificate {
    let ord = orders(m);
    let src = m.source.base();
    let dst = m.target.base();
    let n = m.source.n();
    let mm = m.source.m();

    let isotone_alpha = first_fail(
        (0..src.x_size()).flat_map(|x| (0..src.x_size()).map(move |z| (x, z))),
        |&(x, z)| !ord.src_x.holds(x, z) || ord.dst_x.holds(m.alpha[x], m.alpha[z]),
    );

    let isotone_beta = first_fail(
        (0..src.y_size()).flat_map(|y| (0..src.y_size()).map(move |w| (y, w))),
        |&(y, w)| !ord.src_y.holds(y, w) || ord.dst_y.holds(m.beta[y], m.beta[w]),
    );

    let back_r = first_fail(
        (0..src.x_size()).flat_map(|x| (0..src.y_size()).map(move |y| (x, y))),
        |&(x, y)| !dst.relates(m.alpha[x], m.beta[y]) || src.relates(x, y),
    );

    // α⁻¹[x')₁ R y ⟹ x' R' β(y)
    let forth_r_x = {
        let direct = first_fail(
            (0..dst.x_size()).flat_map(|xp| (0..src.y_size()).map(move |y| (xp, y))),
            |&(xp, y)| {
                let all_related = (0..src.x_size())
                    .filter(|&x| ord.dst_x.holds(xp, m.alpha[x]))
                    .all(|x| src.relates(x, y));
                !all_related || dst.relates(xp, m.beta[y])
            },
        );
        let contra = first_fail(
            (0..dst.x_size()).flat_map(|xp| (0..src.y_size()).map(move |y| (xp, y))),
            |&(xp, y)| {
                if dst.relates(xp, m.beta[y]) {
                    return true;
                }
                (0..src.x_size()).any(|x| ord.dst_x.holds(xp, m.alpha[x]) && !src.relates(x, y))
            },
        );
        assert_eq!(direct, contra, "forth_r_x evaluators disagree");
        direct
    };

    // x R β⁻¹[y')₂ ⟹ α(x) R' y'
    let forth_r_y = {
        let direct = first_fail(
            (0..src.x_size()).flat_map(|x| (0..dst.y_size()).map(move |yp| (x, yp))),
            |&(x, yp)| {
                let all_related = (0..src.y_size())
                    .filter(|&y| ord.dst_y.holds(yp, m.beta[y]))
                    .all(|y| src.relates(x, y));
                !all_related || dst.relates(m.alpha[x], yp)
            },
        );
        let contra = first_fail(
            (0..src.x_size()).flat_map(|x| (0..dst.y_size()).map(move |yp| (x, yp))),
            |&(x, yp)| {
                if dst.relates(m.alpha[x], yp) {
                    return true;
                }
                (0..src.y_size()).any(|y| ord.dst_y.holds(yp, m.beta[y]) && !src.relates(x, y))
            },
        );
        assert_eq!(direct, contra, "forth_r_y evaluators disagree");
        direct
    };

    let src_x_tuples = all_tuples(src.x_size(), n);
    let dst_x_tuples = all_tuples(dst.x_size(), n);
    let src_y_tuples = all_tuples(src.y_size(), mm);
    let dst_y_tuples = all_tuples(dst.y_size(), mm);

    let back_s = {
        let mut verdict = Verdict::Pass;
        'outer: for xs in &src_x_tuples {
            let axs: Vec<usize> = xs.iter().map(|&x| m.alpha[x]).collect();
            for y in 0..src.y_size() {
                if m.target.s().holds(&axs, m.beta[y]) && !m.source.s().holds(xs, y) {
                    let mut w = xs.clone();
                    w.push(y);
                    verdict = Verdict::Fail(w);
                    break 'outer;
                }
            }
        }
        verdict
    };

    // (α⁻¹[x⃗')₁) S y ⟹ x⃗' S' β(y)
    let forth_s = {
        let tuple_leq = |xp: &[usize], xs: &[usize]| {
            xp.iter()
                .zip(xs)
                .all(|(&a, &b)| ord.dst_x.holds(a, m.alpha[b]))
        };
        let mut direct = Verdict::Pass;
        'outer: for xp in &dst_x_tuples {
            for y in 0..src.y_size() {
                let all_related = src_x_tuples
                    .iter()
                    .filter(|xs| tuple_leq(xp, xs))
                    .all(|xs| m.source.s().holds(xs, y));
                if all_related && !m.target.s().holds(xp, m.beta[y]) {
                    let mut w = xp.clone();
                    w.push(y);
                    direct = Verdict::Fail(w);
                    break 'outer;
                }
            }
        }
        let mut contra = Verdict::Pass;
        'outer2: for xp in &dst_x_tuples {
            for y in 0..src.y_size() {
                if m.target.s().holds(xp, m.beta[y]) {
                    continue;
                }
                let witness_exists = src_x_tuples
                    .iter()
                    .any(|xs| tuple_leq(xp, xs) && !m.source.s().holds(xs, y));
                if !witness_exists {
                    let mut w = xp.clone();
                    w.push(y);
                    contra = Verdict::Fail(w);
                    break 'outer2;
                }
            }
        }
        assert_eq!(direct, contra, "forth_s evaluators disagree");
        direct
    };

    let back_t = {
        let mut verdict = Verdict::Pass;
        'outer: for ys in &src_y_tuples {
            let bys: Vec<usize> = ys.iter().map(|&y| m.beta[y]).collect();
            for x in 0..src.x_size() {
                if m.target.t().holds(m.alpha[x], &bys) && !m.source.t().holds(x, ys) {
                    let mut w = vec![x];
                    w.extend_from_slice(ys);
                    verdict = Verdict::Fail(w);
                    break 'outer;
                }
            }
        }
        verdict
    };

    // x T (β⁻¹[y⃗')₂) ⟹ α(x) T' y⃗'
    let forth_t = {
        let tuple_leq = |yp: &[usize], ys: &[usize]| {
            yp.iter()
                .zip(ys)
                .all(|(&a, &b)| ord.dst_y.holds(a, m.beta[b]))
        };
        let mut direct = Verdict::Pass;
        'outer: for yp in &dst_y_tuples {
            for x in 0..src.x_size() {
                let all_related = src_y_tuples
                    .iter()
                    .filter(|ys| tuple_leq(yp, ys))
                    .all(|ys| m.source.t().holds(x, ys));
                if all_related && !m.target.t().holds(m.alpha[x], yp) {
                    let mut w = vec![x];
                    w.extend_from_slice(yp);
                    direct = Verdict::Fail(w);
                    break 'outer;
                }
            }
        }
        let mut contra = Verdict::Pass;
        'outer2: for yp in &dst_y_tuples {
            for x in 0..src.x_size() {
                if m.target.t().holds(m.alpha[x], yp) {
                    continue;
                }
                let witness_exists = src_y_tuples
                    .iter()
                    .any(|ys| tuple_leq(yp, ys) && !m.source.t().holds(x, ys));
                if !witness_exists {
                    let mut w = vec![x];
                    w.extend_from_slice(yp);
                    contra = Verdict::Fail(w);
                    break 'outer2;
                }
            }
        }
        assert_eq!(direct, contra, "forth_t evaluators disagree");
        direct
    };

    MorphismCertificate {
        isotone_alpha,
        isotone_beta,
        back_r,
        forth_r_x,
        forth_r_y,
        back_s,
        forth_s,
        back_t,
        forth_t,
    }
}

fn first_fail<T: IntoWitness>(
    iter: impl Iterator<Item = T>,
    mut ok: impl FnMut(&T) -> bool,
) -> Verdict {
    for item in iter {
        if !ok(&item) {
            return Verdict::Fail(item.into_witness());
        }
    }
    Verdict::Pass
}

trait IntoWitness {
    fn into_witness(self) -> Vec<usize>;
}

impl IntoWitness for (usize, usize) {
    fn into_witness(self) -> Vec<usize> {
        vec![self.0, self.1]
    }
}

pub fn identity(p: &OmegaPolarity) -> BoundedMorphism {
    BoundedMorphism {
        source: p.clone(),
        target: p.clone(),
        alpha: (0..p.base().x_size()).collect(),
        beta: (0..p.base().y_size()).collect(),
    }
}

/// Componentwise composition `second ∘ first`. The result is a bounded
/// morphism whenever both inputs are; in debug builds this is re-verified.
pub fn compose(first: &BoundedMorphism, second: &BoundedMorphism) -> Result<BoundedMorphism> {
    if first.target != second.source {
        return Err(Error::CompositionMismatch);
    }
    let composed = BoundedMorphism {
        source: first.source.clone(),
        target: second.target.clone(),
        alpha: first.alpha.iter().map(|&x| second.alpha[x]).collect(),
        beta: first.beta.iter().map(|&y| second.beta[y]).collect(),
    };
    debug_assert!(
        !(verify(first).all_pass() && verify(second).all_pass()) || verify(&composed).all_pass()
    );
    Ok(composed)
}

/// The dual homomorphism `A ↦ α⁻¹A` from the target's stable NLO to the
/// source's. Requires a certified morphism.
pub fn dual_hom(m: &BoundedMorphism, cap: usize) -> Result<Homomorphism> {
    if !verify(m).all_pass() {
        return Err(Error::NotCertified("dual_hom input"));
    }
    let (dst_lat, dst_nlo) = stable_nlo(&m.target, cap)?;
    let (src_lat, src_nlo) = stable_nlo(&m.source, cap)?;
    let map = dst_lat
        .elements()
        .iter()
        .map(|a| {
            let pre = m.alpha_preimage(a);
            src_lat.index_of(&pre).ok_or(Error::NotStable)
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(Homomorphism {
        source: dst_nlo,
        target: src_nlo,
        map,
    })
}

/// Outcome of evaluating the two derivation-equation families against the
/// condition-level verdicts. Theorems force agreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    /// `β⁻¹(rho'(A)) = rho(α⁻¹A)` for all stable A ⊆ X'
    pub rho_equation: bool,
    /// `α⁻¹(lam'(B)) = lam(β⁻¹B)` for all stable B ⊆ Y'
    pub lam_equation: bool,
    /// verdict of back_r ∧ forth_r_x
    pub conditions_rx: bool,
    /// verdict of back_r ∧ forth_r_y
    pub conditions_ry: bool,
}

impl EquivReport {
    pub fn agrees(&self) -> bool {
        self.rho_equation == self.conditions_rx && self.lam_equation == self.conditions_ry
    }
}

/// Evaluates the set-level equations over every stable set of the target
/// and compares with the pointwise conditions.
pub fn equiv_conditions(m: &BoundedMorphism, cap: usize) -> Result<EquivReport> {
    let dst = m.target.base();
    let src = m.source.base();
    let dst_lat = enumerate_stable_capped(dst, cap)?;

    let mut rho_equation = true;
    let mut lam_equation = true;
    for a in dst_lat.elements() {
        let lhs = m.beta_preimage(&dst.rho(a)?);
        let rhs = src.rho(&m.alpha_preimage(a))?;
        if lhs != rhs {
            rho_equation = false;
        }
        // Y-side stable sets are exactly the derivations of X-side ones.
        let b = dst.rho(a)?;
        let lhs2 = m.alpha_preimage(&dst.lam(&b)?);
        let rhs2 = src.lam(&m.beta_preimage(&b))?;
        if lhs2 != rhs2 {
            lam_equation = false;
        }
    }

    let cert = verify(m);
    Ok(EquivReport {
        rho_equation,
        lam_equation,
        conditions_rx: cert.back_r.passed() && cert.forth_r_x.passed(),
        conditions_ry: cert.back_r.passed() && cert.forth_r_y.passed(),
    })
}

fn preserves_relations(m: &BoundedMorphism) -> bool {
    let src = m.source.base();
    let preserves_r = (0..src.x_size()).all(|x| {
        (0..src.y_size())
            .all(|y| !src.relates(x, y) || m.target.base().relates(m.alpha[x], m.beta[y]))
    });
    let preserves_s = all_tuples(src.x_size(), m.source.n()).iter().all(|xs| {
        let axs: Vec<usize> = xs.iter().map(|&x| m.alpha[x]).collect();
        (0..src.y_size()).all(|y| !m.source.s().holds(xs, y) || m.target.s().holds(&axs, m.beta[y]))
    });
    let preserves_t = all_tuples(src.y_size(), m.source.m()).iter().all(|ys| {
        let bys: Vec<usize> = ys.iter().map(|&y| m.beta[y]).collect();
        (0..src.x_size())
            .all(|x| !m.source.t().holds(x, ys) || m.target.t().holds(m.alpha[x], &bys))
    });
    preserves_r && preserves_s && preserves_t
}

fn is_bijection(map: &[usize], target_size: usize) -> bool {
    if map.len() != target_size {
        return false;
    }
    let mut hit = vec![false; target_size];
    for &v in map {
        if hit[v] {
            return false;
        }
        hit[v] = true;
    }
    true
}

/// Certified + bijective carrier maps + preservation of R, S and T.
pub fn is_isomorphism(m: &BoundedMorphism) -> bool {
    verify(m).all_pass()
        && is_bijection(&m.alpha, m.target.base().x_size())
        && is_bijection(&m.beta, m.target.base().y_size())
        && preserves_relations(m)
}

pub fn invert(m: &BoundedMorphism) -> Result<BoundedMorphism> {
    if !is_isomorphism(m) {
        return Err(Error::NotIsomorphism);
    }
    let mut alpha_inv = vec![0; m.alpha.len()];
    for (x, &v) in m.alpha.iter().enumerate() {
        alpha_inv[v] = x;
    }
    let mut beta_inv = vec![0; m.beta.len()];
    for (y, &v) in m.beta.iter().enumerate() {
        beta_inv[v] = y;
    }
    let inv = BoundedMorphism {
        source: m.target.clone(),
        target: m.source.clone(),
        alpha: alpha_inv,
        beta: beta_inv,
    };
    debug_assert!(verify(&inv).all_pass());
    Ok(inv)
}

/// Checks that `sub` is a substructure of `sup` along the given strictly
/// increasing inclusion maps, then certifies the inclusion pair.
pub fn inner_substructure_cert(
    sub: &OmegaPolarity,
    sup: &OmegaPolarity,
    x_incl: &[usize],
    y_incl: &[usize],
) -> Result<MorphismCertificate> {
    if sub.n() != sup.n() || sub.m() != sup.m() {
        return Err(Error::ArityMismatch {
            expected: sup.n(),
            found: sub.n(),
        });
    }
    check_inclusion(x_incl, sub.base().x_size(), sup.base().x_size(), "X")?;
    check_inclusion(y_incl, sub.base().y_size(), sup.base().y_size(), "Y")?;

    for x in 0..sub.base().x_size() {
        for y in 0..sub.base().y_size() {
            if sub.base().relates(x, y) != sup.base().relates(x_incl[x], y_incl[y]) {
                return Err(Error::NotSubstructure(alloc::format!(
                    "relation differs at ({x},{y})"
                )));
            }
        }
    }
    for xs in all_tuples(sub.base().x_size(), sub.n()) {
        let mapped: Vec<usize> = xs.iter().map(|&x| x_incl[x]).collect();
        for y in 0..sub.base().y_size() {
            if sub.s().holds(&xs, y) != sup.s().holds(&mapped, y_incl[y]) {
                return Err(Error::NotSubstructure(alloc::format!(
                    "n-ary relation differs at {xs:?},{y}"
                )));
            }
        }
    }
    for ys in all_tuples(sub.base().y_size(), sub.m()) {
        let mapped: Vec<usize> = ys.iter().map(|&y| y_incl[y]).collect();
        for x in 0..sub.base().x_size() {
            if sub.t().holds(x, &ys) != sup.t().holds(x_incl[x], &mapped) {
                return Err(Error::NotSubstructure(alloc::format!(
                    "m-ary relation differs at {x},{ys:?}"
                )));
            }
        }
    }

    let inclusion = BoundedMorphism {
        source: sub.clone(),
        target: sup.clone(),
        alpha: x_incl.to_vec(),
        beta: y_incl.to_vec(),
    };
    Ok(verify(&inclusion))
}

/// Prefix-carrier inclusion: element `i` of `sub` is element `i` of `sup`.
pub fn is_inner_substructure(
    sub: &OmegaPolarity,
    sup: &OmegaPolarity,
) -> Result<MorphismCertificate> {
    let x_incl: Vec<usize> = (0..sub.base().x_size()).collect();
    let y_incl: Vec<usize> = (0..sub.base().y_size()).collect();
    inner_substructure_cert(sub, sup, &x_incl, &y_incl)
}

fn check_inclusion(incl: &[usize], sub_size: usize, sup_size: usize, what: &str) -> Result<()> {
    if incl.len() != sub_size {
        return Err(Error::DimensionMismatch {
            expected: sub_size,
            found: incl.len(),
        });
    }
    for w in incl.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::NotSubstructure(alloc::format!(
                "{what}-inclusion is not strictly increasing"
            )));
        }
    }
    if let Some(&last) = incl.last() {
        if last >= sup_size {
            return Err(Error::IndexOutOfRange {
                index: last,
                size: sup_size,
            });
        }
    }
    Ok(())
}

/// The image of a certified morphism: carriers are the map images
/// (ascending), relations the restrictions of the target's.
#[derive(Clone, Debug)]
pub struct ImageInfo {
    pub structure: OmegaPolarity,
    /// target indices forming the X carrier of the image, ascending
    pub x_members: Vec<usize>,
    pub y_members: Vec<usize>,
    /// certificate of the inclusion of the image into the target
    pub inclusion_cert: MorphismCertificate,
    /// the corestriction source → image when α, β are injective and
    /// relation-preserving; certified an isomorphism
    pub source_iso: Option<BoundedMorphism>,
}

pub fn image(m: &BoundedMorphism) -> Result<ImageInfo> {
    if !verify(m).all_pass() {
        return Err(Error::NotCertified("image input"));
    }
    let x_members = m.alpha_image().to_vec();
    let y_members = m.beta_image().to_vec();
    let x_pos = |v: usize| x_members.binary_search(&v).expect("member");
    let y_pos = |v: usize| y_members.binary_search(&v).expect("member");

    let base = crate::polarity::Polarity::from_fn(x_members.len(), y_members.len(), |x, y| {
        m.target.base().relates(x_members[x], y_members[y])
    });
    let mut s = RelS::empty(m.source.n(), x_members.len(), y_members.len())?;
    for xs in all_tuples(x_members.len(), m.source.n()) {
        let mapped: Vec<usize> = xs.iter().map(|&x| x_members[x]).collect();
        for y in 0..y_members.len() {
            if m.target.s().holds(&mapped, y_members[y]) {
                s.insert(&xs, y);
            }
        }
    }
    let mut t = RelT::empty(m.source.m(), x_members.len(), y_members.len())?;
    for ys in all_tuples(y_members.len(), m.source.m()) {
        let mapped: Vec<usize> = ys.iter().map(|&y| y_members[y]).collect();
        for x in 0..x_members.len() {
            if m.target.t().holds(x_members[x], &mapped) {
                t.insert(x, &ys);
            }
        }
    }
    // Sections of the restricted relations stay stable for images of
    // certified morphisms, so this construction goes through.
    let structure = OmegaPolarity::new(base, s, t)?;

    let inclusion_cert = inner_substructure_cert(&structure, &m.target, &x_members, &y_members)?;

    let is_injective = |map: &[usize]| {
        let mut sorted = map.to_vec();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    };
    let source_iso = if is_injective(&m.alpha) && is_injective(&m.beta) && preserves_relations(m) {
        let core = BoundedMorphism {
            source: m.source.clone(),
            target: structure.clone(),
            alpha: m.alpha.iter().map(|&v| x_pos(v)).collect(),
            beta: m.beta.iter().map(|&v| y_pos(v)).collect(),
        };
        debug_assert!(is_isomorphism(&core));
        Some(core)
    } else {
        None
    };

    Ok(ImageInfo {
        structure,
        x_members,
        y_members,
        inclusion_cert,
        source_iso,
    })
}

/// The dual of an NLO homomorphism θ: L → M: filters and ideals of M pull
/// back along θ, giving a bounded morphism M₊ → L₊ between the canonical
/// structures.
pub fn dual_of_hom(h: &Homomorphism) -> Result<BoundedMorphism> {
    if !is_homomorphism(h).is_empty() {
        return Err(Error::NotCertified("dual_of_hom input"));
    }
    let src_cs = canonical_structure(&h.target)?; // M₊ (the morphism's source)
    let dst_cs = canonical_structure(&h.source)?; // L₊
    let l = h.source.lattice();
    let m = h.target.lattice();

    let l_filters = filters(l);
    let l_ideals = ideals(l);
    let m_filters = filters(m);
    let m_ideals = ideals(m);

    let find_filter = |wanted: &BitSet| -> Result<usize> {
        l_filters
            .iter()
            .position(|f| f.elements == *wanted)
            .ok_or(Error::NotFilter)
    };
    let find_ideal = |wanted: &BitSet| -> Result<usize> {
        l_ideals
            .iter()
            .position(|d| d.elements == *wanted)
            .ok_or(Error::NotIdeal)
    };

    let mut alpha = Vec::with_capacity(m_filters.len());
    for f in &m_filters {
        let mut pre = BitSet::empty(l.size());
        for a in 0..l.size() {
            if f.elements.contains(h.map[a]) {
                pre.insert(a);
            }
        }
        alpha.push(find_filter(&pre)?);
    }
    let mut beta = Vec::with_capacity(m_ideals.len());
    for d in &m_ideals {
        let mut pre = BitSet::empty(l.size());
        for a in 0..l.size() {
            if d.elements.contains(h.map[a]) {
                pre.insert(a);
            }
        }
        beta.push(find_ideal(&pre)?);
    }

    let dual = BoundedMorphism {
        source: src_cs,
        target: dst_cs,
        alpha,
        beta,
    };
    debug_assert!(verify(&dual).all_pass());
    Ok(dual)
}

/// `F` is `D`-maximal: disjoint from `D` and no strictly larger filter is.
pub fn d_maximal(l: &FiniteLattice, f: &BitSet, d: &BitSet) -> Result<bool> {
    if !is_filter(l, f) {
        return Err(Error::NotFilter);
    }
    if !is_ideal(l, d) {
        return Err(Error::NotIdeal);
    }
    if !f.is_disjoint(d) {
        return Ok(false);
    }
    // every filter of a finite lattice is principal, so scanning the
    // principal ones covers them all
    Ok(filters(l)
        .iter()
        .all(|g| !(f.is_subset(&g.elements) && *f != g.elements && g.elements.is_disjoint(d))))
}

/// Filters that are D-maximal for some ideal D, by generator index.
pub fn i_maximal_filters(l: &FiniteLattice) -> Vec<usize> {
    let fs = filters(l);
    let is = ideals(l);
    (0..fs.len())
        .filter(|&fi| {
            is.iter()
                .any(|d| d_maximal(l, &fs[fi].elements, &d.elements).unwrap_or(false))
        })
        .collect()
}

/// A certified morphism into the canonical structure of `nlo` is maximal
/// covering when the α-image contains every i-maximal filter.
pub fn is_maximal_covering(m: &BoundedMorphism, nlo: &OmegaNlo) -> Result<bool> {
    let cs = canonical_structure(nlo)?;
    if m.target != cs {
        return Err(Error::NotCertified("target is not the canonical structure"));
    }
    if !verify(m).all_pass() {
        return Err(Error::NotCertified("maximal covering input"));
    }
    let image = m.alpha_image();
    Ok(i_maximal_filters(nlo.lattice())
        .iter()
        .all(|&fi| image.contains(fi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::DEFAULT_CAP;
    use crate::polarity::Polarity;

    #[test]
    fn identity_passes_everywhere() {
        for (_, op) in fixtures::fixture_omegas() {
            let id = identity(&op);
            assert!(verify(&id).all_pass());
            assert!(is_isomorphism(&id));
        }
    }

    #[test]
    fn x_dropped_substructure_fails_forth_with_witness() {
        // keep X = {0,1} but all of Y: the missing x' = 2 breaks the x-forth
        // condition at y = 2
        let sup = fixtures::with_r_relations(&fixtures::neq3());
        let sub_base = Polarity::from_fn(2, 3, |x, y| x != y);
        let sub = fixtures::with_r_relations(&sub_base);
        let m = BoundedMorphism::new(sub, sup, vec![0, 1], vec![0, 1, 2]).unwrap();
        let cert = verify(&m);
        assert_eq!(cert.forth_r_x, Verdict::Fail(vec![2, 2]));
        assert!(!cert.all_pass());
    }

    #[test]
    fn both_dropped_substructure_is_inner() {
        // dropping 2 from both carriers of (X,X,≠) leaves an inner
        // substructure: the inclusion certifies
        let sup = fixtures::with_r_relations(&fixtures::neq3());
        let sub = fixtures::with_r_relations(&Polarity::from_fn(2, 2, |x, y| x != y));
        let cert = is_inner_substructure(&sub, &sup).unwrap();
        assert!(cert.all_pass());
    }

    #[test]
    fn compose_laws() {
        let op = fixtures::with_r_relations(&fixtures::neq3());
        let id = identity(&op);
        let cycle =
            BoundedMorphism::new(op.clone(), op.clone(), vec![1, 2, 0], vec![1, 2, 0]).unwrap();
        assert!(verify(&cycle).all_pass());
        let left = compose(&id, &cycle).unwrap();
        assert_eq!(left.alpha, cycle.alpha);
        let twice = compose(&cycle, &cycle).unwrap();
        let thrice = compose(&twice, &cycle).unwrap();
        assert_eq!(thrice.alpha, id.alpha);
        // associativity on the same triple
        let assoc_a = compose(&compose(&cycle, &cycle).unwrap(), &cycle).unwrap();
        let assoc_b = compose(&cycle, &compose(&cycle, &cycle).unwrap()).unwrap();
        assert_eq!(assoc_a, assoc_b);
    }

    #[test]
    fn three_cycle_is_an_isomorphism_with_inverse() {
        let op = fixtures::with_r_relations(&fixtures::neq3());
        let cycle = BoundedMorphism::new(op.clone(), op, vec![1, 2, 0], vec![1, 2, 0]).unwrap();
        assert!(is_isomorphism(&cycle));
        let inv = invert(&cycle).unwrap();
        assert_eq!(inv.alpha, vec![2, 0, 1]);
        let around = compose(&cycle, &inv).unwrap();
        assert_eq!(around.alpha, vec![0, 1, 2]);
    }

    #[test]
    fn non_surjective_inclusion_is_not_an_isomorphism() {
        let sup = fixtures::with_r_relations(&fixtures::neq3());
        let sub = fixtures::with_r_relations(&Polarity::from_fn(2, 2, |x, y| x != y));
        let m = BoundedMorphism::new(sub, sup, vec![0, 1], vec![0, 1]).unwrap();
        assert!(verify(&m).all_pass());
        assert!(!is_isomorphism(&m));
        assert!(matches!(invert(&m), Err(Error::NotIsomorphism)));
    }

    #[test]
    fn dual_hom_of_identity_is_identity() {
        let op = fixtures::with_r_relations(&fixtures::le2());
        let h = dual_hom(&identity(&op), DEFAULT_CAP).unwrap();
        assert_eq!(h.map, vec![0, 1]);
        assert!(is_homomorphism(&h).is_empty());
    }

    #[test]
    fn preimages_of_stable_sets_are_stable() {
        use crate::lattice::enumerate_stable;
        use crate::polarity::Side;
        let ops = fixtures::fixture_omegas();
        for (_, src) in &ops {
            for (_, dst) in &ops {
                if src.base().x_size() != dst.base().x_size() {
                    continue;
                }
                let m = BoundedMorphism::new(
                    src.clone(),
                    dst.clone(),
                    (0..src.base().x_size()).collect(),
                    (0..src.base().y_size()).collect(),
                );
                let Ok(m) = m else { continue };
                if !verify(&m).all_pass() {
                    continue;
                }
                let lat = enumerate_stable(dst.base()).unwrap();
                for a in lat.elements() {
                    let pre = m.alpha_preimage(a);
                    assert!(src.base().is_stable(Side::X, &pre).unwrap());
                }
            }
        }
    }

    #[test]
    fn equiv_conditions_agree_on_fixture_morphisms() {
        let op = fixtures::with_r_relations(&fixtures::le2());
        let id = identity(&op);
        let rep = equiv_conditions(&id, DEFAULT_CAP).unwrap();
        assert!(rep.agrees());
        assert!(rep.rho_equation && rep.lam_equation);

        // a deliberately broken β: swap on le2 target
        let broken = BoundedMorphism::new(op.clone(), op, vec![0, 1], vec![1, 0]).unwrap();
        let rep = equiv_conditions(&broken, DEFAULT_CAP).unwrap();
        assert!(rep.agrees());
        assert!(!rep.rho_equation || !rep.lam_equation);
    }

    #[test]
    fn image_of_automorphism_is_whole() {
        let op = fixtures::with_r_relations(&fixtures::neq3());
        let cycle =
            BoundedMorphism::new(op.clone(), op.clone(), vec![1, 2, 0], vec![1, 2, 0]).unwrap();
        let info = image(&cycle).unwrap();
        assert_eq!(info.structure, op);
        assert!(info.inclusion_cert.all_pass());
        assert!(info.source_iso.is_some());
    }

    #[test]
    fn whole_structure_is_trivially_inner() {
        let op = fixtures::with_r_relations(&fixtures::le2());
        let cert = is_inner_substructure(&op, &op).unwrap();
        assert!(cert.all_pass());
    }

    #[test]
    fn d_maximal_on_ch2() {
        let l = fixtures::ch2();
        let fs = filters(&l);
        let is = ideals(&l);
        // [1) is (0]-maximal
        assert!(d_maximal(&l, &fs[1].elements, &is[0].elements).unwrap());
        // [0) meets every ideal
        assert!(!d_maximal(&l, &fs[0].elements, &is[0].elements).unwrap());
        assert!(!d_maximal(&l, &fs[0].elements, &is[1].elements).unwrap());
        assert_eq!(i_maximal_filters(&l), vec![1]);
        // non-filter input errors
        assert!(matches!(
            d_maximal(&l, &BitSet::empty(2), &is[0].elements),
            Err(Error::NotFilter)
        ));
    }

    #[test]
    fn i_maximal_filters_of_n5() {
        let l = fixtures::n5();
        // brute scan cross-check
        let fs = filters(&l);
        let is = ideals(&l);
        let expect: Vec<usize> = (0..fs.len())
            .filter(|&fi| {
                is.iter().any(|d| {
                    fs[fi].elements.is_disjoint(&d.elements)
                        && fs.iter().all(|g| {
                            !(fs[fi].elements.is_subset(&g.elements)
                                && g.elements != fs[fi].elements
                                && g.elements.is_disjoint(&d.elements))
                        })
                })
            })
            .collect();
        assert_eq!(i_maximal_filters(&l), expect);
    }
}
