//! Direct sums of Ω-polarities: disjoint-union carriers where every
//! cross-summand pair is related, summand injections, the isomorphism of
//! the sum's stable lattice with the product of the summands' lattices, and
//! the coproduct mediator.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use crate::morphism::{verify, BoundedMorphism};
use crate::nlo::{is_homomorphism, FiniteLattice, Homomorphism, OmegaNlo, OpTable, Report};
use crate::omega::{all_tuples, stable_nlo, OmegaPolarity, RelS, RelT};
use crate::polarity::{Polarity, Side};

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub summands: Vec<OmegaPolarity>,
    pub total: OmegaPolarity,
    pub x_offsets: Vec<usize>,
    pub y_offsets: Vec<usize>,
}

/// Tags are list positions; carrier `k` occupies the contiguous block at
/// its offset. A tuple is in the sum's n-ary relation iff some coordinate
/// tag differs from the result tag, or all tags agree and the summand's
/// relation holds.
pub fn direct_sum(summands: &[OmegaPolarity]) -> Result<DirectSum> {
    let (n, m) = match summands.first() {
        Some(first) => (first.n(), first.m()),
        None => (1, 1),
    };
    direct_sum_with_arities(summands, n, m)
}

pub fn direct_sum_with_arities(
    summands: &[OmegaPolarity],
    n: usize,
    m: usize,
) -> Result<DirectSum> {
    for s in summands {
        if s.n() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: s.n(),
            });
        }
        if s.m() != m {
            return Err(Error::ArityMismatch {
                expected: m,
                found: s.m(),
            });
        }
    }

    let mut x_offsets = Vec::with_capacity(summands.len());
    let mut y_offsets = Vec::with_capacity(summands.len());
    let mut x_total = 0;
    let mut y_total = 0;
    for s in summands {
        x_offsets.push(x_total);
        y_offsets.push(y_total);
        x_total += s.base().x_size();
        y_total += s.base().y_size();
    }

    let x_tag = tag_table(&x_offsets, x_total);
    let y_tag = tag_table(&y_offsets, y_total);

    let base = Polarity::from_fn(x_total, y_total, |x, y| {
        let (jx, lx) = x_tag[x];
        let (jy, ly) = y_tag[y];
        jx != jy || summands[jx].base().relates(lx, ly)
    });

    let mut s_rel = RelS::empty(n, x_total, y_total)?;
    for xs in all_tuples(x_total, n) {
        for y in 0..y_total {
            let (jy, ly) = y_tag[y];
            let same_tag = xs.iter().all(|&x| x_tag[x].0 == jy);
            let holds = if same_tag {
                let locals: Vec<usize> = xs.iter().map(|&x| x_tag[x].1).collect();
                summands[jy].s().holds(&locals, ly)
            } else {
                true
            };
            if holds {
                s_rel.insert(&xs, y);
            }
        }
    }

    let mut t_rel = RelT::empty(m, x_total, y_total)?;
    for x in 0..x_total {
        let (jx, lx) = x_tag[x];
        for ys in all_tuples(y_total, m) {
            let same_tag = ys.iter().all(|&y| y_tag[y].0 == jx);
            let holds = if same_tag {
                let locals: Vec<usize> = ys.iter().map(|&y| y_tag[y].1).collect();
                summands[jx].t().holds(lx, &locals)
            } else {
                true
            };
            if holds {
                t_rel.insert(x, &ys);
            }
        }
    }

    let total = OmegaPolarity::new(base, s_rel, t_rel)?;
    Ok(DirectSum {
        summands: summands.to_vec(),
        total,
        x_offsets,
        y_offsets,
    })
}

fn tag_table(offsets: &[usize], total: usize) -> Vec<(usize, usize)> {
    let mut table = Vec::with_capacity(total);
    for (j, &off) in offsets.iter().enumerate() {
        let end = offsets.get(j + 1).copied().unwrap_or(total);
        for local in 0..(end - off) {
            table.push((j, local));
        }
    }
    table
}

/// The tagging injection of summand `k`, a certified bounded morphism whose
/// image is an inner substructure isomorphic to the summand.
pub fn injection(ds: &DirectSum, k: usize) -> Result<BoundedMorphism> {
    let summand = ds.summands.get(k).ok_or(Error::IndexOutOfRange {
        index: k,
        size: ds.summands.len(),
    })?;
    let alpha = (0..summand.base().x_size())
        .map(|x| ds.x_offsets[k] + x)
        .collect();
    let beta = (0..summand.base().y_size())
        .map(|y| ds.y_offsets[k] + y)
        .collect();
    let m = BoundedMorphism {
        source: summand.clone(),
        target: ds.total.clone(),
        alpha,
        beta,
    };
    debug_assert!(verify(&m).all_pass());
    Ok(m)
}

/// The mediating map from the sum's stable NLO to the product of the
/// summands' stable NLOs, with everything needed to check it is a bijective
/// homomorphism.
#[derive(Clone, Debug)]
pub struct ProductIso {
    /// the sum's stable lattice and dual algebra
    pub total_nlo: OmegaNlo,
    pub total_elements: Vec<BitSet>,
    /// the product of the summands' dual algebras
    pub product: OmegaNlo,
    /// summand lattice sizes, for decoding flat product indices
    pub factor_sizes: Vec<usize>,
    /// map: sum-lattice index → flat product index
    pub map: Vec<usize>,
    pub hom_report: Report,
    pub bijective: bool,
    /// every componentwise union pulled back from the product is stable
    pub inverse_stable: bool,
}

pub fn product_isomorphism(ds: &DirectSum, cap: usize) -> Result<ProductIso> {
    let (total_lat, total_nlo) = stable_nlo(&ds.total, cap)?;

    let mut factor_lats = Vec::new();
    let mut factor_nlos = Vec::new();
    for s in &ds.summands {
        let (lat, nlo) = stable_nlo(s, cap)?;
        factor_lats.push(lat);
        factor_nlos.push(nlo);
    }
    let factor_sizes: Vec<usize> = factor_lats.iter().map(|l| l.len()).collect();
    let product = product_nlo(&factor_nlos, ds.total.n(), ds.total.m())?;

    // θ(A)(k) = α_k⁻¹ A, flattened with summand 0 most significant
    let mut map = Vec::with_capacity(total_lat.len());
    for a in total_lat.elements() {
        let mut flat = 0;
        for (k, lat) in factor_lats.iter().enumerate() {
            let size = ds.summands[k].base().x_size();
            let mut local = BitSet::empty(size);
            for x in 0..size {
                if a.contains(ds.x_offsets[k] + x) {
                    local.insert(x);
                }
            }
            let idx = lat.index_of(&local).ok_or(Error::NotStable)?;
            flat = flat * lat.len() + idx;
        }
        map.push(flat);
    }

    let bijective = {
        let mut hit = vec![false; product.lattice().size()];
        let mut ok = map.len() == product.lattice().size();
        for &v in &map {
            if hit[v] {
                ok = false;
            }
            hit[v] = true;
        }
        ok && hit.iter().all(|&h| h)
    };

    let hom = Homomorphism {
        source: total_nlo.clone(),
        target: product.clone(),
        map: map.clone(),
    };
    let hom_report = is_homomorphism(&hom);

    // inverse direction: componentwise unions of summand elements are stable
    let mut inverse_stable = true;
    for flat in 0..product.lattice().size() {
        let locals = unflatten(flat, &factor_sizes);
        let mut union = BitSet::empty(ds.total.base().x_size());
        for (k, &li) in locals.iter().enumerate() {
            for x in factor_lats[k].element(li)?.iter() {
                union.insert(ds.x_offsets[k] + x);
            }
        }
        if !ds.total.base().is_stable(Side::X, &union)? {
            inverse_stable = false;
        }
    }

    Ok(ProductIso {
        total_nlo,
        total_elements: total_lat.elements().to_vec(),
        product,
        factor_sizes,
        map,
        hom_report,
        bijective,
        inverse_stable,
    })
}

fn unflatten(mut flat: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        out[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    out
}

/// Componentwise product of NLOs; the empty product is the one-element
/// lattice with constant operations.
fn product_nlo(factors: &[OmegaNlo], n: usize, m: usize) -> Result<OmegaNlo> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.lattice().size()).collect();
    let total: usize = sizes.iter().product();
    let leq = BitMatrix::from_fn(total, total, |a, b| {
        let va = unflatten(a, &sizes);
        let vb = unflatten(b, &sizes);
        va.iter()
            .zip(&vb)
            .enumerate()
            .all(|(k, (&x, &y))| factors[k].lattice().leq(x, y))
    });
    let mut meet = Vec::with_capacity(total * total);
    let mut join = Vec::with_capacity(total * total);
    for a in 0..total {
        let va = unflatten(a, &sizes);
        for b in 0..total {
            let vb = unflatten(b, &sizes);
            let mut mf = 0;
            let mut jf = 0;
            for k in 0..sizes.len() {
                mf = mf * sizes[k] + factors[k].lattice().meet2(va[k], vb[k]);
                jf = jf * sizes[k] + factors[k].lattice().join2(va[k], vb[k]);
            }
            meet.push(mf);
            join.push(jf);
        }
    }
    let mut bot = 0;
    let mut top = 0;
    for k in 0..sizes.len() {
        bot = bot * sizes[k] + factors[k].lattice().bot();
        top = top * sizes[k] + factors[k].lattice().top();
    }
    let lattice = FiniteLattice::from_parts(leq, meet, join, bot, top);

    let f = OpTable::from_fn(n, total, |args| {
        let locals: Vec<Vec<usize>> = args.iter().map(|&a| unflatten(a, &sizes)).collect();
        let mut flat = 0;
        for k in 0..sizes.len() {
            let karg: Vec<usize> = locals.iter().map(|t| t[k]).collect();
            flat = flat * sizes[k] + factors[k].f().get(&karg);
        }
        flat
    })?;
    let g = OpTable::from_fn(m, total, |args| {
        let locals: Vec<Vec<usize>> = args.iter().map(|&a| unflatten(a, &sizes)).collect();
        let mut flat = 0;
        for k in 0..sizes.len() {
            let karg: Vec<usize> = locals.iter().map(|t| t[k]).collect();
            flat = flat * sizes[k] + factors[k].g().get(&karg);
        }
        flat
    })?;
    OmegaNlo::new(lattice, f, g)
}

/// The fold map out of a direct sum determined by a compatible family: on
/// the `k`-tagged block it acts as the `k`-th morphism.
pub fn coproduct_mediator(ds: &DirectSum, family: &[BoundedMorphism]) -> Result<BoundedMorphism> {
    if family.len() != ds.summands.len() {
        return Err(Error::DimensionMismatch {
            expected: ds.summands.len(),
            found: family.len(),
        });
    }
    let target = match family.first() {
        Some(first) => first.target.clone(),
        None => ds.total.clone(), // empty sum: the unique map out of it
    };
    for (k, phi) in family.iter().enumerate() {
        if phi.source != ds.summands[k] {
            return Err(Error::CompositionMismatch);
        }
        if phi.target != target {
            return Err(Error::CompositionMismatch);
        }
        if !verify(phi).all_pass() {
            return Err(Error::NotCertified("coproduct family member"));
        }
    }

    let mut alpha = Vec::with_capacity(ds.total.base().x_size());
    let mut beta = Vec::with_capacity(ds.total.base().y_size());
    for phi in family {
        alpha.extend_from_slice(&phi.alpha);
        beta.extend_from_slice(&phi.beta);
    }
    let mediator = BoundedMorphism {
        source: ds.total.clone(),
        target,
        alpha,
        beta,
    };
    if !verify(&mediator).all_pass() {
        return Err(Error::NotCertified("coproduct mediator"));
    }
    Ok(mediator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::DEFAULT_CAP;
    use crate::morphism::{compose, identity, image, is_isomorphism};

    #[test]
    fn empty_sum_is_empty() {
        let ds = direct_sum(&[]).unwrap();
        assert_eq!(ds.total.base().x_size(), 0);
        assert_eq!(ds.total.base().y_size(), 0);
        let iso = product_isomorphism(&ds, DEFAULT_CAP).unwrap();
        assert_eq!(iso.total_elements.len(), 1);
        assert!(iso.bijective);
        assert!(iso.hom_report.is_empty());
    }

    #[test]
    fn singleton_sum_is_isomorphic_to_summand() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        let ds = direct_sum(&[le2.clone()]).unwrap();
        let inj = injection(&ds, 0).unwrap();
        assert!(verify(&inj).all_pass());
        assert!(is_isomorphism(&inj));
        assert_eq!(ds.total, le2);
    }

    #[test]
    fn le2_plus_le2_relation_matrix() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        let ds = direct_sum(&[le2.clone(), le2]).unwrap();
        let b = ds.total.base();
        assert_eq!(b.x_size(), 4);
        // within tags: ≤; across tags: everything
        for x in 0..4 {
            for y in 0..4 {
                let same = (x < 2) == (y < 2);
                let expect = if same { x % 2 <= y % 2 } else { true };
                assert_eq!(b.relates(x, y), expect, "({x},{y})");
            }
        }
    }

    #[test]
    fn injections_certify_and_have_inner_images() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        let ds = direct_sum(&[le2.clone(), le2]).unwrap();
        for k in 0..2 {
            let inj = injection(&ds, k).unwrap();
            assert!(verify(&inj).all_pass());
            let info = image(&inj).unwrap();
            assert!(info.inclusion_cert.all_pass());
            let iso = info.source_iso.expect("injection corestricts to an iso");
            assert!(is_isomorphism(&iso));
        }
    }

    #[test]
    fn product_sizes_on_fixtures() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        let neq3 = fixtures::with_r_relations(&fixtures::neq3());
        let ds = direct_sum(&[le2.clone(), le2.clone()]).unwrap();
        let iso = product_isomorphism(&ds, DEFAULT_CAP).unwrap();
        assert_eq!(iso.total_elements.len(), 4);
        assert!(iso.bijective && iso.hom_report.is_empty() && iso.inverse_stable);

        let ds = direct_sum(&[neq3, le2]).unwrap();
        let iso = product_isomorphism(&ds, DEFAULT_CAP).unwrap();
        assert_eq!(iso.total_elements.len(), 16);
        assert!(iso.bijective && iso.hom_report.is_empty() && iso.inverse_stable);
    }

    #[test]
    fn mediator_folds_identities() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        let ds = direct_sum(&[le2.clone(), le2.clone()]).unwrap();
        let id = identity(&le2);
        let mediator = coproduct_mediator(&ds, &[id.clone(), id.clone()]).unwrap();
        assert!(verify(&mediator).all_pass());
        for k in 0..2 {
            let inj = injection(&ds, k).unwrap();
            let through = compose(&inj, &mediator).unwrap();
            assert_eq!(through.alpha, id.alpha);
            assert_eq!(through.beta, id.beta);
        }
    }

    #[test]
    fn singleton_mediator_is_the_morphism_itself() {
        let neq3 = fixtures::with_r_relations(&fixtures::neq3());
        let ds = direct_sum(&[neq3.clone()]).unwrap();
        let id = identity(&neq3);
        let mediator = coproduct_mediator(&ds, &[id.clone()]).unwrap();
        assert_eq!(mediator.alpha, id.alpha);
        assert_eq!(mediator.beta, id.beta);
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let le2 = fixtures::with_r_relations(&fixtures::le2());
        let p = fixtures::le2();
        let s = RelS::full(2, 2, 2).unwrap();
        let t = RelT::from_polarity(&p);
        let binary = OmegaPolarity::new(p, s, t).unwrap();
        assert!(matches!(
            direct_sum(&[le2, binary]),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
