//! Seeded generation of valid structures for the randomized suites.
//!
//! Random relations rarely have stable sections, so Ω-polarities are
//! produced by closing every section under the matching closure operator
//! until fixpoint (the process only adds tuples, hence terminates, and a
//! fixpoint is exactly a relation with all sections stable). Random normal
//! operators on an abstract lattice come from a stable-sectioned relation
//! on its filter/ideal polarity, transported back along the finite-lattice
//! isomorphism with the double dual.

use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_stable_capped, DEFAULT_CAP};
use crate::morphism::{verify, BoundedMorphism};
use crate::nlo::{canonical_polarity, FiniteLattice, OpTable};
use crate::omega::{all_tuples, eval_f_s, eval_g_t, OmegaPolarity, RelS, RelT};
use crate::polarity::{Polarity, Side};
use crate::quasi::{MonotonicityType, RelSEps};
use crate::rng::SplitMix64;

pub fn random_polarity(x_size: usize, y_size: usize, rng: &mut SplitMix64) -> Polarity {
    Polarity::from_fn(x_size, y_size, |_, _| rng.coin())
}

pub fn random_rel_s(arity: usize, p: &Polarity, rng: &mut SplitMix64) -> Result<RelS> {
    let mut rel = RelS::empty(arity, p.x_size(), p.y_size())?;
    for xs in all_tuples(p.x_size(), arity) {
        for y in 0..p.y_size() {
            if rng.coin() {
                rel.insert(&xs, y);
            }
        }
    }
    Ok(rel)
}

pub fn random_rel_t(arity: usize, p: &Polarity, rng: &mut SplitMix64) -> Result<RelT> {
    let mut rel = RelT::empty(arity, p.x_size(), p.y_size())?;
    for x in 0..p.x_size() {
        for ys in all_tuples(p.y_size(), arity) {
            if rng.coin() {
                rel.insert(x, &ys);
            }
        }
    }
    Ok(rel)
}

/// Closes every section under the matching closure until fixpoint.
pub fn stabilize_rel_s(p: &Polarity, rel: &RelS) -> Result<RelS> {
    let mut current = rel.clone();
    loop {
        let mut changed = false;
        for xs in all_tuples(p.x_size(), current.arity()) {
            let row = current.row_section(&xs)?;
            let closed = p.close(Side::Y, &row)?;
            for y in closed.iter() {
                if !row.contains(y) {
                    current.insert(&xs, y);
                    changed = true;
                }
            }
            for i in 0..current.arity() {
                if xs[i] != 0 {
                    continue;
                }
                for y in 0..p.y_size() {
                    let col = current.column_section(&xs, i, y)?;
                    let closed = p.close(Side::X, &col)?;
                    for x in closed.iter() {
                        if !col.contains(x) {
                            let mut probe = xs.clone();
                            probe[i] = x;
                            current.insert(&probe, y);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

pub fn stabilize_rel_t(p: &Polarity, rel: &RelT) -> Result<RelT> {
    let mut current = rel.clone();
    loop {
        let mut changed = false;
        for ys in all_tuples(p.y_size(), current.arity()) {
            let row = current.row_section(&ys)?;
            let closed = p.close(Side::X, &row)?;
            for x in closed.iter() {
                if !row.contains(x) {
                    current.insert(x, &ys);
                    changed = true;
                }
            }
            for i in 0..current.arity() {
                if ys[i] != 0 {
                    continue;
                }
                for x in 0..p.x_size() {
                    let col = current.column_section(x, &ys, i)?;
                    let closed = p.close(Side::Y, &col)?;
                    for y in closed.iter() {
                        if !col.contains(y) {
                            let mut probe = ys.clone();
                            probe[i] = y;
                            current.insert(x, &probe);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

/// A random Ω-polarity over a random base with the given arities.
pub fn random_omega_polarity(
    x_size: usize,
    y_size: usize,
    n: usize,
    m: usize,
    rng: &mut SplitMix64,
) -> Result<OmegaPolarity> {
    let p = random_polarity(x_size, y_size, rng);
    let s = stabilize_rel_s(&p, &random_rel_s(n, &p, rng)?)?;
    let t = stabilize_rel_t(&p, &random_rel_t(m, &p, rng)?)?;
    OmegaPolarity::new(p, s, t)
}

/// Closes ε-relation sections coordinate-wise until fixpoint.
pub fn stabilize_rel_s_eps(p: &Polarity, rel: &RelSEps) -> Result<RelSEps> {
    let mut current = rel.clone();
    loop {
        let mut changed = false;
        for zs in current.eps().clone().tuples(p) {
            let row = current.row_section(p, &zs);
            let closed = p.close(Side::Y, &row)?;
            for y in closed.iter() {
                if !row.contains(y) {
                    current.insert_with(p, &zs, y);
                    changed = true;
                }
            }
            for i in 0..current.eps().arity() {
                if zs[i] != 0 {
                    continue;
                }
                for y in 0..p.y_size() {
                    let col = current.column_section(p, &zs, i, y);
                    let closed = p.close(current.eps().side(i), &col)?;
                    for z in closed.iter() {
                        if !col.contains(z) {
                            let mut probe = zs.clone();
                            probe[i] = z;
                            current.insert_with(p, &probe, y);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

pub fn random_rel_s_eps(
    eps: MonotonicityType,
    p: &Polarity,
    rng: &mut SplitMix64,
) -> Result<RelSEps> {
    let mut rel = RelSEps::empty(eps, p)?;
    for zs in rel.eps().clone().tuples(p) {
        for y in 0..p.y_size() {
            if rng.coin() {
                rel.insert_with(p, &zs, y);
            }
        }
    }
    stabilize_rel_s_eps(p, &rel)
}

/// A random complete normal operator table on `l`, via a stable-sectioned
/// relation on the filter/ideal polarity of `l` and the isomorphism with
/// the double dual. Every complete normal operator arises this way.
pub fn random_normal_operator(
    l: &FiniteLattice,
    arity: usize,
    rng: &mut SplitMix64,
) -> Result<OpTable> {
    let cp = canonical_polarity(l);
    let s = stabilize_rel_s(&cp, &random_rel_s(arity, &cp, rng)?)?;
    let (theta, lat) = theta_iso(l)?;
    OpTable::from_fn(arity, l.size(), |args| {
        let sets: Vec<BitSet> = args
            .iter()
            .map(|&a| lat.element(theta[a]).expect("theta image").clone())
            .collect();
        let image = eval_f_s(&cp, &s, &sets);
        let idx = lat.index_of(&image).expect("stable");
        theta.iter().position(|&v| v == idx).expect("theta is onto")
    })
}

pub fn random_normal_dual_operator(
    l: &FiniteLattice,
    arity: usize,
    rng: &mut SplitMix64,
) -> Result<OpTable> {
    let cp = canonical_polarity(l);
    let t = stabilize_rel_t(&cp, &random_rel_t(arity, &cp, rng)?)?;
    let (theta, lat) = theta_iso(l)?;
    OpTable::from_fn(arity, l.size(), |args| {
        let sets: Vec<BitSet> = args
            .iter()
            .map(|&a| lat.element(theta[a]).expect("theta image").clone())
            .collect();
        let image = eval_g_t(&cp, &t, &sets);
        let idx = lat.index_of(&image).expect("stable");
        theta.iter().position(|&v| v == idx).expect("theta is onto")
    })
}

/// θ: element ↦ down-set, as indices into the stable lattice of the
/// filter/ideal polarity; bijective for finite lattices.
fn theta_iso(l: &FiniteLattice) -> Result<(Vec<usize>, crate::lattice::StableLattice)> {
    let cp = canonical_polarity(l);
    let lat = enumerate_stable_capped(&cp, DEFAULT_CAP)?;
    if lat.len() != l.size() {
        return Err(Error::NotStable);
    }
    let theta = (0..l.size())
        .map(|e| lat.index_of(&l.downset(e)).ok_or(Error::NotStable))
        .collect::<Result<Vec<usize>>>()?;
    Ok((theta, lat))
}

/// All functions `0..from → 0..to` as tables, in lexicographic order.
pub fn all_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    if from == 0 {
        return alloc::vec![Vec::new()];
    }
    if to == 0 {
        return Vec::new(); // no map into an empty carrier from a nonempty one
    }
    let mut out = Vec::new();
    let mut current = alloc::vec![0usize; from];
    loop {
        out.push(current.clone());
        let mut k = from;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            current[k] += 1;
            if current[k] < to {
                break;
            }
            current[k] = 0;
        }
    }
}

/// Exhaustively enumerates the certified bounded morphisms between two
/// Ω-polarities. Candidate count is guarded.
pub fn all_morphisms(src: &OmegaPolarity, dst: &OmegaPolarity) -> Result<Vec<BoundedMorphism>> {
    let alpha_count = pow_guard(dst.base().x_size(), src.base().x_size())?;
    let beta_count = pow_guard(dst.base().y_size(), src.base().y_size())?;
    let total = alpha_count
        .checked_mul(beta_count)
        .ok_or(Error::CapacityExceeded { cap: 1 << 22 })?;
    if total > (1 << 22) {
        return Err(Error::CapacityExceeded { cap: 1 << 22 });
    }
    let mut out = Vec::new();
    for alpha in all_maps(src.base().x_size(), dst.base().x_size()) {
        for beta in all_maps(src.base().y_size(), dst.base().y_size()) {
            let m = BoundedMorphism {
                source: src.clone(),
                target: dst.clone(),
                alpha: alpha.clone(),
                beta,
            };
            if verify(&m).all_pass() {
                out.push(m);
            }
        }
    }
    Ok(out)
}

fn pow_guard(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base.max(1))
            .ok_or(Error::CapacityExceeded { cap: 1 << 22 })?;
    }
    Ok(acc)
}

/// All bound-preserving lattice homomorphisms between two finite lattices,
/// as element tables.
pub fn all_lattice_homs(l: &FiniteLattice, m: &FiniteLattice) -> Vec<Vec<usize>> {
    all_maps(l.size(), m.size())
        .into_iter()
        .filter(|map| {
            map[l.bot()] == m.bot()
                && map[l.top()] == m.top()
                && (0..l.size()).all(|a| {
                    (0..l.size()).all(|b| {
                        map[l.meet2(a, b)] == m.meet2(map[a], map[b])
                            && map[l.join2(a, b)] == m.join2(map[a], map[b])
                    })
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::nlo::{is_normal_dual_operator, is_normal_operator};
    use crate::omega::validate_sections;

    #[test]
    fn stabilization_yields_stable_sections() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let x = 1 + rng.below(4);
            let y = 1 + rng.below(4);
            let p = random_polarity(x, y, &mut rng);
            let s = stabilize_rel_s(&p, &random_rel_s(2, &p, &mut rng).unwrap()).unwrap();
            let t = stabilize_rel_t(&p, &random_rel_t(2, &p, &mut rng).unwrap()).unwrap();
            let report = validate_sections(&p, &s, &t).unwrap();
            assert!(report.is_empty());
        }
    }

    #[test]
    fn random_operators_are_normal() {
        let mut rng = SplitMix64::new(11);
        for (_, l) in fixtures::fixture_lattices() {
            for _ in 0..5 {
                let f = random_normal_operator(&l, 1, &mut rng).unwrap();
                assert!(is_normal_operator(&l, &f).is_empty());
                let g = random_normal_dual_operator(&l, 1, &mut rng).unwrap();
                assert!(is_normal_dual_operator(&l, &g).is_empty());
            }
        }
    }

    #[test]
    fn all_maps_counts() {
        assert_eq!(all_maps(0, 5).len(), 1);
        assert_eq!(all_maps(2, 3).len(), 9);
        assert_eq!(all_maps(3, 2).len(), 8);
        assert!(all_maps(2, 0).is_empty());
    }

    #[test]
    fn identity_is_among_enumerated_morphisms() {
        let op = fixtures::with_r_relations(&fixtures::le2());
        let pool = all_morphisms(&op, &op).unwrap();
        assert!(pool
            .iter()
            .any(|m| m.alpha == vec![0, 1] && m.beta == vec![0, 1]));
    }

    #[test]
    fn lattice_hom_enumeration_finds_embeddings() {
        let ch2 = fixtures::ch2();
        let diamond = fixtures::diamond();
        let homs = all_lattice_homs(&ch2, &diamond);
        // bounds are pinned, so every hom is 0↦0, 1↦3
        assert_eq!(homs, alloc::vec![alloc::vec![0, 3]]);
    }
}
