//! Brute-force verification suites for the structural laws, exercised over
//! exhaustive small instances and seeded random ones. These back the
//! `selfcheck` command and the acceptance tests.
//!
//! Oracles here are deliberately independent of the production code paths
//! they cross-check: stable sets by filtering all subsets, operators by
//! literal first-order quantifier evaluation, filters by testing every
//! subset for the filter laws.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::fixtures;
use crate::lattice::{enumerate_stable_capped, StableLattice, DEFAULT_CAP};
use crate::morphism::{
    compose, dual_hom, dual_of_hom, equiv_conditions, identity, image, is_isomorphism,
    is_maximal_covering, verify, BoundedMorphism,
};
use crate::nlo::{
    canonical_structure, filters, ideals, is_homomorphism, lower_extension, theta_embedding,
    upper_extension, FiniteLattice, Homomorphism, OmegaNlo, OpTable,
};
use crate::omega::{
    all_tuples, relation_from_dual_operator, relation_from_operator, stable_nlo, OmegaPolarity,
    RelS, RelT,
};
use crate::polarity::{Polarity, Side};
use crate::quasi::{
    eps_quasi_order, f_s_eps, validate_eps_sections, Eps, MonotonicityType, RelSEps,
};
use crate::rng::SplitMix64;
use crate::sample;

const MAX_FAILURES: usize = 16;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < MAX_FAILURES {
            self.failures.push(msg());
        }
    }
}

// ---------------------------------------------------------------------------
// oracles

/// Oracle: stable sets by filtering every subset, in lectic order.
pub fn brute_force_stable(p: &Polarity, side: Side) -> Vec<BitSet> {
    let n = p.side_size(side);
    assert!(n <= 20, "oracle is exponential");
    let mut out: Vec<BitSet> = (0u64..(1 << n))
        .map(|mask| {
            let mut s = BitSet::empty(n);
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    s.insert(i);
                }
            }
            s
        })
        .filter(|s| p.is_stable(side, s).expect("width ok"))
        .collect();
    out.sort();
    out
}

/// Oracle: the first-order membership condition for `f_S`, evaluated as a
/// literal quantifier nest with no use of the derivation operators.
pub fn f_s_first_order(p: &Polarity, s: &RelS, args: &[BitSet]) -> BitSet {
    let tuples = all_tuples(p.x_size(), s.arity());
    let mut out = BitSet::empty(p.x_size());
    for x in 0..p.x_size() {
        let holds = (0..p.y_size()).all(|y| {
            let premise = tuples
                .iter()
                .filter(|zs| zs.iter().zip(args).all(|(&z, a)| a.contains(z)))
                .all(|zs| s.holds(zs, y));
            !premise || p.relates(x, y)
        });
        if holds {
            out.insert(x);
        }
    }
    out
}

/// Oracle: the first-order membership condition for `g_T`.
pub fn g_t_first_order(p: &Polarity, t: &RelT, args: &[BitSet]) -> BitSet {
    let tuples = all_tuples(p.y_size(), t.arity());
    let mut out = BitSet::empty(p.x_size());
    for x in 0..p.x_size() {
        let holds = tuples
            .iter()
            .filter(|ys| {
                ys.iter()
                    .zip(args)
                    .all(|(&y, a)| a.iter().all(|z| p.relates(z, y)))
            })
            .all(|ys| t.holds(x, ys));
        if holds {
            out.insert(x);
        }
    }
    out
}

/// Oracle: nonempty up-closed meet-closed subsets, by scanning all subsets.
pub fn brute_filters(l: &FiniteLattice) -> Vec<BitSet> {
    assert!(l.size() <= 16, "oracle is exponential");
    (1u64..(1 << l.size()))
        .map(|mask| {
            let mut s = BitSet::empty(l.size());
            for i in 0..l.size() {
                if mask >> i & 1 == 1 {
                    s.insert(i);
                }
            }
            s
        })
        .filter(|s| crate::nlo::is_filter(l, s))
        .collect()
}

pub fn brute_ideals(l: &FiniteLattice) -> Vec<BitSet> {
    assert!(l.size() <= 16, "oracle is exponential");
    (1u64..(1 << l.size()))
        .map(|mask| {
            let mut s = BitSet::empty(l.size());
            for i in 0..l.size() {
                if mask >> i & 1 == 1 {
                    s.insert(i);
                }
            }
            s
        })
        .filter(|s| crate::nlo::is_ideal(l, s))
        .collect()
}

fn subsets(width: usize) -> Vec<BitSet> {
    assert!(width <= 20);
    (0u64..(1 << width))
        .map(|mask| {
            let mut s = BitSet::empty(width);
            for i in 0..width {
                if mask >> i & 1 == 1 {
                    s.insert(i);
                }
            }
            s
        })
        .collect()
}

fn all_polarities(x: usize, y: usize) -> Vec<Polarity> {
    assert!(x * y <= 16);
    (0u64..(1 << (x * y)))
        .map(|mask| Polarity::from_fn(x, y, |a, b| mask >> (a * y + b) & 1 == 1))
        .collect()
}

// ---------------------------------------------------------------------------
// suites

/// Galois adjunction, the union/intersection exchange law, triple-composition
/// collapse, stability of derivations, up-set and decomposition laws, and the
/// compatibility of the relation with both quasi-orders — for every polarity
/// with carriers up to `max_size`.
pub fn galois_suite(max_size: usize) -> SuiteReport {
    let mut r = SuiteReport::new("galois-closure");
    for x in 0..=max_size {
        for y in 0..=max_size {
            for p in all_polarities(x, y) {
                galois_one(&mut r, &p);
            }
        }
    }
    r
}

fn galois_one(r: &mut SuiteReport, p: &Polarity) {
    let x = p.x_size();
    let y = p.y_size();
    let xsubs = subsets(x);
    let ysubs = subsets(y);

    for a in &xsubs {
        let rho_a = p.rho(a).unwrap();
        for b in &ysubs {
            let lam_b = p.lam(b).unwrap();
            r.check(a.is_subset(&lam_b) == b.is_subset(&rho_a), || {
                format!("adjunction fails at A={a:?}, B={b:?} on {:?}", p.pairs())
            });
        }
        // triple composition collapses
        let rlr = p.rho(&p.lam(&rho_a).unwrap()).unwrap();
        r.check(rlr == rho_a, || format!("rho-lam-rho differs at {a:?}"));
        r.check(p.is_stable(Side::Y, &rho_a).unwrap(), || {
            format!("derivation of {a:?} is not stable")
        });
    }
    for b in &ysubs {
        let lam_b = p.lam(b).unwrap();
        let lrl = p.lam(&p.rho(&lam_b).unwrap()).unwrap();
        r.check(lrl == lam_b, || format!("lam-rho-lam differs at {b:?}"));
        r.check(p.is_stable(Side::X, &lam_b).unwrap(), || {
            format!("derivation of {b:?} is not stable")
        });
    }

    // union/intersection exchange over families
    let families = |subs: &[BitSet]| -> Vec<Vec<usize>> {
        if subs.len() <= 8 {
            (0u32..(1 << subs.len()))
                .map(|m| (0..subs.len()).filter(|i| m >> i & 1 == 1).collect())
                .collect()
        } else {
            let mut fams: Vec<Vec<usize>> = vec![Vec::new(), (0..subs.len()).collect()];
            for i in 0..subs.len() {
                fams.push(vec![i]);
                for j in (i + 1)..subs.len() {
                    fams.push(vec![i, j]);
                }
            }
            fams
        }
    };
    for fam in families(&xsubs) {
        let mut union = BitSet::empty(x);
        let mut inter = BitSet::full(y);
        for &i in &fam {
            union.union_with(&xsubs[i]);
            inter.intersect_with(&p.rho(&xsubs[i]).unwrap());
        }
        r.check(p.rho(&union).unwrap() == inter, || {
            format!("derivation of a union differs from intersection, family {fam:?}")
        });
    }
    for fam in families(&ysubs) {
        let mut union = BitSet::empty(y);
        let mut inter = BitSet::full(x);
        for &i in &fam {
            union.union_with(&ysubs[i]);
            inter.intersect_with(&p.lam(&ysubs[i]).unwrap());
        }
        r.check(p.lam(&union).unwrap() == inter, || {
            format!("co-derivation of a union differs from intersection, family {fam:?}")
        });
    }

    // stable sets are up-sets; decomposition identities
    let qx = p.quasi_order(Side::X);
    let qy = p.quasi_order(Side::Y);
    r.check(qx.is_reflexive() && qx.is_transitive(), || {
        String::from("x-order not a quasi-order")
    });
    r.check(qy.is_reflexive() && qy.is_transitive(), || {
        String::from("y-order not a quasi-order")
    });
    for a in &xsubs {
        if p.is_stable(Side::X, a).unwrap() {
            r.check(qx.is_upset(a).unwrap(), || {
                format!("stable {a:?} is not an up-set")
            });
            let mut union = BitSet::empty(x);
            for e in a.iter() {
                union.union_with(&p.principal_stable(Side::X, e).unwrap());
            }
            let join = p.close(Side::X, &union).unwrap();
            let rho_a = p.rho(a).unwrap();
            let mut meet = BitSet::full(x);
            for e in rho_a.iter() {
                meet.intersect_with(&p.lam(&BitSet::singleton(y, e)).unwrap());
            }
            r.check(join == *a && meet == *a, || {
                format!("decomposition fails at {a:?}")
            });
        }
    }
    for b in &ysubs {
        if p.is_stable(Side::Y, b).unwrap() {
            r.check(qy.is_upset(b).unwrap(), || {
                format!("stable {b:?} is not an up-set")
            });
        }
    }

    // relation respects the quasi-orders
    for xe in 0..x {
        for xe2 in 0..x {
            for ye in 0..y {
                for ye2 in 0..y {
                    if qx.holds(xe, xe2) && p.relates(xe, ye) && qy.holds(ye, ye2) {
                        r.check(p.relates(xe2, ye2), || {
                            format!("order compatibility fails at ({xe},{xe2},{ye},{ye2})")
                        });
                    }
                }
            }
        }
    }
}

/// NextClosure enumeration against the subset-filter oracle, lattice counts
/// on the fixtures, completeness under family meets/joins, decomposition,
/// and the equal count of stable sets on both sides.
pub fn stable_lattice_suite(seed: u64, samples: usize, max_x: usize) -> SuiteReport {
    let mut r = SuiteReport::new("stable-lattice");
    let mut rng = SplitMix64::new(seed);

    let counts = [("neq3", fixtures::neq3(), 8), ("le2", fixtures::le2(), 2)];
    for (name, p, expect) in counts {
        let lat = enumerate_stable_capped(&p, DEFAULT_CAP).unwrap();
        r.check(lat.len() == expect, || {
            format!("{name}: expected {expect} stable sets")
        });
        exhaustive_completeness(&mut r, &lat);
    }

    for i in 0..samples {
        let x = 1 + rng.below(max_x);
        let y = 1 + rng.below(6);
        let p = sample::random_polarity(x, y, &mut rng);
        let lat = enumerate_stable_capped(&p, DEFAULT_CAP).unwrap();
        let oracle = brute_force_stable(&p, Side::X);
        r.check(lat.elements() == &oracle[..], || {
            format!("sample {i}: enumeration disagrees with the subset filter ({x}x{y})")
        });
        let y_side = brute_force_stable(&p, Side::Y);
        r.check(lat.len() == y_side.len(), || {
            format!(
                "sample {i}: side counts differ {} vs {}",
                lat.len(),
                y_side.len()
            )
        });
        // rho is an order-reversing bijection between the two sides
        let images: Vec<BitSet> = lat.elements().iter().map(|a| p.rho(a).unwrap()).collect();
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        r.check(
            distinct.len() == lat.len() && images.iter().all(|b| y_side.contains(b)),
            || format!("sample {i}: derivation is not a bijection onto the other side"),
        );
        let antitone = (0..lat.len()).all(|a| {
            (0..lat.len()).all(|b| {
                lat.leq(a, b).unwrap() == images[b].is_subset(&images[a])
            })
        });
        r.check(antitone, || {
            format!("sample {i}: derivation does not reverse the order")
        });
        for a in 0..lat.len() {
            r.check(lat.verify_decomposition(a).unwrap(), || {
                format!("sample {i}: decomposition fails at element {a}")
            });
        }
        // sampled families stay inside the lattice
        for _ in 0..16 {
            let fam: Vec<usize> = (0..lat.len()).filter(|_| rng.coin()).collect();
            let join = lat.join(&fam).unwrap();
            let meet = lat.meet(&fam).unwrap();
            r.check(join < lat.len() && meet < lat.len(), || {
                format!("sample {i}: family join/meet escaped the lattice")
            });
        }
    }
    r
}

fn exhaustive_completeness(r: &mut SuiteReport, lat: &StableLattice) {
    let n = lat.len();
    assert!(n <= 12);
    for mask in 0u32..(1 << n) {
        let fam: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let join = lat.join(&fam).unwrap();
        let meet = lat.meet(&fam).unwrap();
        r.check(join < n && meet < n, || {
            format!("family {fam:?} join/meet escaped")
        });
        // the join is the least upper bound, the meet the greatest lower bound
        let lub_ok = fam.iter().all(|&i| lat.leq(i, join).unwrap())
            && (0..n)
                .all(|u| !fam.iter().all(|&i| lat.leq(i, u).unwrap()) || lat.leq(join, u).unwrap());
        let glb_ok = fam.iter().all(|&i| lat.leq(meet, i).unwrap())
            && (0..n)
                .all(|u| !fam.iter().all(|&i| lat.leq(u, i).unwrap()) || lat.leq(u, meet).unwrap());
        r.check(lub_ok && glb_ok, || {
            format!("family {fam:?} join/meet not lub/glb")
        });
    }
}

/// Complete join/meet preservation of the induced operators, roundtrips
/// between relations and operator tables, first-order evaluation agreement,
/// the principal-closure lemma, and the classification of all unary
/// complete normal operators on the Boolean-cube fixture by atom images.
pub fn operator_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut r = SuiteReport::new("operators");
    let mut rng = SplitMix64::new(seed);

    for i in 0..samples {
        let x = 1 + rng.below(4);
        let y = 1 + rng.below(4);
        let n = i % 3;
        let m = (i + 1) % 3;
        let op = match sample::random_omega_polarity(x, y, n, m, &mut rng) {
            Ok(op) => op,
            Err(e) => {
                r.check(false, || format!("sample {i}: generation failed: {e}"));
                continue;
            }
        };
        let lat = enumerate_stable_capped(op.base(), DEFAULT_CAP).unwrap();

        preservation_checks(&mut r, i, &op, &lat);

        // relation ↔ operator roundtrips
        let (lat2, nlo) = stable_nlo(&op, DEFAULT_CAP).unwrap();
        debug_assert_eq!(lat.elements(), lat2.elements());
        match relation_from_operator(&lat2, nlo.f()) {
            Ok(s_back) => r.check(&s_back == op.s(), || {
                format!("sample {i}: relation roundtrip differs for the operator")
            }),
            Err(e) => r.check(false, || format!("sample {i}: operator not normal: {e}")),
        }
        match relation_from_dual_operator(&lat2, nlo.g()) {
            Ok(t_back) => r.check(&t_back == op.t(), || {
                format!("sample {i}: relation roundtrip differs for the dual operator")
            }),
            Err(e) => r.check(false, || {
                format!("sample {i}: dual operator not normal: {e}")
            }),
        }

        // first-order evaluation agreement on sampled argument tuples
        for _ in 0..8 {
            let args: Vec<BitSet> = (0..n)
                .map(|_| lat.element(rng.below(lat.len())).unwrap().clone())
                .collect();
            let via_sets = op.f_s(&args).unwrap();
            let via_fo = f_s_first_order(op.base(), op.s(), &args);
            r.check(via_sets == via_fo, || {
                format!("sample {i}: first-order and set evaluation differ")
            });
            let args: Vec<BitSet> = (0..m)
                .map(|_| lat.element(rng.below(lat.len())).unwrap().clone())
                .collect();
            let via_sets = op.g_t(&args).unwrap();
            let via_fo = g_t_first_order(op.base(), op.t(), &args);
            r.check(via_sets == via_fo, || {
                format!("sample {i}: dual first-order and set evaluation differ")
            });
        }

        // principal-closure lemma: a related tuple relates its closures
        for (xs, yy) in op.s().tuple_list() {
            let members: Vec<Vec<usize>> = xs
                .iter()
                .map(|&e| op.base().principal_stable(Side::X, e).unwrap().to_vec())
                .collect();
            let mut ok = true;
            crate::omega::for_each_product(&members, &mut |zs| {
                if !op.s().holds(zs, yy) {
                    ok = false;
                    return false;
                }
                true
            });
            r.check(ok, || {
                format!("sample {i}: principal closure lemma fails for S")
            });
        }
        for (xx, ys) in op.t().tuple_list() {
            let members: Vec<Vec<usize>> = ys
                .iter()
                .map(|&e| op.base().principal_stable(Side::Y, e).unwrap().to_vec())
                .collect();
            let mut ok = true;
            crate::omega::for_each_product(&members, &mut |zs| {
                if !op.t().holds(xx, zs) {
                    ok = false;
                    return false;
                }
                true
            });
            r.check(ok, || {
                format!("sample {i}: principal closure lemma fails for T")
            });
        }
    }

    // every unary complete normal operator on the Boolean cube, via atom images
    let p = fixtures::neq3();
    let lat = enumerate_stable_capped(&p, DEFAULT_CAP).unwrap();
    let atoms: Vec<usize> = (0..3)
        .map(|e| lat.index_of(&BitSet::singleton(3, e)).unwrap())
        .collect();
    let mut image_choice = [0usize; 3];
    loop {
        let table = OpTable::from_fn(1, lat.len(), |args| {
            let a = lat.element(args[0]).unwrap();
            let mut items = Vec::new();
            for (e, &img) in image_choice.iter().enumerate() {
                if a.contains(e) {
                    items.push(img);
                }
            }
            lat.join(&items).unwrap()
        })
        .unwrap();
        match relation_from_operator(&lat, &table) {
            Ok(s) => {
                // f_{S_f} must reproduce the table
                let op = OmegaPolarity::new(p.clone(), s, RelT::from_polarity(&p)).unwrap();
                let mut agree = true;
                for a in 0..lat.len() {
                    let out = op.f_s(&[lat.element(a).unwrap().clone()]).unwrap();
                    if lat.index_of(&out) != Some(table.get(&[a])) {
                        agree = false;
                    }
                }
                r.check(agree, || {
                    format!("atom-image operator {image_choice:?} is not recovered")
                });
            }
            Err(e) => r.check(false, || {
                format!("atom-image operator {image_choice:?} flagged as non-normal: {e}")
            }),
        }
        let _ = atoms;
        // next assignment
        let mut k = 3;
        let mut done = false;
        loop {
            if k == 0 {
                done = true;
                break;
            }
            k -= 1;
            image_choice[k] += 1;
            if image_choice[k] < lat.len() {
                break;
            }
            image_choice[k] = 0;
        }
        if done {
            break;
        }
    }
    r
}

/// Exhaustive family checks when the lattice is small; binary joins plus
/// the empty join otherwise, which in a finite lattice is equivalent.
fn preservation_checks(r: &mut SuiteReport, i: usize, op: &OmegaPolarity, lat: &StableLattice) {
    let len = lat.len();
    let exhaustive = len <= 8;
    for coord in 0..op.n() {
        for ctx in all_tuples(len, op.n()) {
            if ctx[coord] != 0 {
                continue;
            }
            let mut args: Vec<BitSet> = ctx
                .iter()
                .map(|&c| lat.element(c).unwrap().clone())
                .collect();
            let fams: Vec<Vec<usize>> = if exhaustive {
                (0u32..(1 << len))
                    .map(|m| (0..len).filter(|b| m >> b & 1 == 1).collect())
                    .collect()
            } else {
                let mut fams: Vec<Vec<usize>> = vec![Vec::new()];
                for a in 0..len {
                    for b in a..len {
                        fams.push(vec![a, b]);
                    }
                }
                fams
            };
            for fam in fams {
                let joined = lat.join(&fam).unwrap();
                args[coord] = lat.element(joined).unwrap().clone();
                let lhs = op.f_s(&args).unwrap();
                let mut rhs_items = Vec::new();
                for &b in &fam {
                    args[coord] = lat.element(b).unwrap().clone();
                    rhs_items.push(lat.index_of(&op.f_s(&args).unwrap()).unwrap());
                }
                let rhs = lat.join(&rhs_items).unwrap();
                r.check(lat.index_of(&lhs) == Some(rhs), || {
                    format!("sample {i}: join preservation fails in coordinate {coord}")
                });
            }
        }
    }
    for coord in 0..op.m() {
        for ctx in all_tuples(len, op.m()) {
            if ctx[coord] != 0 {
                continue;
            }
            let mut args: Vec<BitSet> = ctx
                .iter()
                .map(|&c| lat.element(c).unwrap().clone())
                .collect();
            let fams: Vec<Vec<usize>> = if exhaustive {
                (0u32..(1 << len))
                    .map(|m| (0..len).filter(|b| m >> b & 1 == 1).collect())
                    .collect()
            } else {
                let mut fams: Vec<Vec<usize>> = vec![Vec::new()];
                for a in 0..len {
                    for b in a..len {
                        fams.push(vec![a, b]);
                    }
                }
                fams
            };
            for fam in fams {
                let met = lat.meet(&fam).unwrap();
                args[coord] = lat.element(met).unwrap().clone();
                let lhs = op.g_t(&args).unwrap();
                let mut rhs_items = Vec::new();
                for &b in &fam {
                    args[coord] = lat.element(b).unwrap().clone();
                    rhs_items.push(lat.index_of(&op.g_t(&args).unwrap()).unwrap());
                }
                let rhs = lat.meet(&rhs_items).unwrap();
                r.check(lat.index_of(&lhs) == Some(rhs), || {
                    format!("sample {i}: meet preservation fails in coordinate {coord}")
                });
            }
        }
    }
}

/// Residual adjunction and the box/diamond adjunction, exhaustively on the
/// fixtures plus binary-relation variants.
pub fn adjunction_suite() -> SuiteReport {
    let mut r = SuiteReport::new("adjunctions");

    // residuals of the unary fixtures and of binary full relations
    for (name, op) in fixtures::fixture_omegas() {
        residual_adjunction(&mut r, name, &op);
    }
    for (name, p) in [("le2", fixtures::le2()), ("neq3", fixtures::neq3())] {
        let s = RelS::full(2, p.x_size(), p.y_size()).unwrap();
        let t = RelT::from_polarity(&p);
        let op = OmegaPolarity::new(p, s, t).unwrap();
        residual_adjunction(&mut r, name, &op);
    }

    // diamond ⊣ box for a shared binary relation
    for (name, p) in [
        ("neq3", fixtures::neq3()),
        ("le2", fixtures::le2()),
        ("empty2", fixtures::empty2()),
    ] {
        let relations = {
            let mut v = vec![RelS::from_polarity(&p)];
            if name != "le2" {
                v.push(RelS::empty(1, p.x_size(), p.y_size()).unwrap());
            }
            v
        };
        let lat = enumerate_stable_capped(&p, DEFAULT_CAP).unwrap();
        for s in relations {
            let t = s.as_rel_t().unwrap();
            for a in lat.elements() {
                let dia = crate::omega::diamond(&p, &s, a).unwrap();
                for b in lat.elements() {
                    let boxed = crate::omega::box_op(&p, &t, b).unwrap();
                    r.check(dia.is_subset(b) == a.is_subset(&boxed), || {
                        format!("{name}: diamond/box adjunction fails")
                    });
                }
            }
        }
    }
    r
}

fn residual_adjunction(r: &mut SuiteReport, name: &str, op: &OmegaPolarity) {
    let lat = enumerate_stable_capped(op.base(), DEFAULT_CAP).unwrap();
    let n = op.n();
    for i in 0..n {
        for ctx in all_tuples(lat.len(), n) {
            if ctx[i] != 0 {
                continue;
            }
            for a in lat.elements() {
                for b in lat.elements() {
                    let mut args: Vec<BitSet> = ctx
                        .iter()
                        .map(|&c| lat.element(c).unwrap().clone())
                        .collect();
                    args[i] = a.clone();
                    let f = op.f_s(&args).unwrap();
                    args[i] = b.clone();
                    let res = morphism_free_residual(op, &args, i);
                    r.check(f.is_subset(b) == a.is_subset(&res), || {
                        format!("{name}: residual adjunction fails in coordinate {i}")
                    });
                }
            }
        }
    }
}

fn morphism_free_residual(op: &OmegaPolarity, args: &[BitSet], i: usize) -> BitSet {
    crate::omega::residual(op, args, i).unwrap()
}

/// Canonical structures and extensions over the fixture lattices with the
/// identity pair and seeded random operator pairs.
pub fn canonical_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut r = SuiteReport::new("canonical-extension");
    let mut rng = SplitMix64::new(seed);
    let lattices = fixtures::fixture_lattices();

    for (name, l) in &lattices {
        let a = fixtures::identity_nlo(l.clone());
        canonical_one(&mut r, name, &a);
        // the general filter enumerator agrees with the principal list
        let brute: Vec<BitSet> = brute_filters(l);
        let principal: Vec<BitSet> = filters(l).into_iter().map(|f| f.elements).collect();
        r.check(
            brute.len() == principal.len() && principal.iter().all(|p| brute.contains(p)),
            || format!("{name}: filters are not exactly the principal ones"),
        );
        let brute: Vec<BitSet> = brute_ideals(l);
        let principal: Vec<BitSet> = ideals(l).into_iter().map(|d| d.elements).collect();
        r.check(
            brute.len() == principal.len() && principal.iter().all(|p| brute.contains(p)),
            || format!("{name}: ideals are not exactly the principal ones"),
        );
    }

    for i in 0..samples {
        let (name, l) = &lattices[i % lattices.len()];
        let n = 1 + i % 2;
        let m = 1 + (i / 2) % 2;
        let f = sample::random_normal_operator(l, n, &mut rng).unwrap();
        let g = sample::random_normal_dual_operator(l, m, &mut rng).unwrap();
        match OmegaNlo::new(l.clone(), f, g) {
            Ok(a) => canonical_one(&mut r, name, &a),
            Err(e) => r.check(false, || format!("sample {i}: generated pair invalid: {e}")),
        }
    }
    r
}

fn canonical_one(r: &mut SuiteReport, name: &str, a: &OmegaNlo) {
    let theta = theta_embedding(a).unwrap();
    let d = &theta.diagnostics;
    r.check(d.injective, || format!("{name}: embedding not injective"));
    r.check(d.lattice_hom, || {
        format!("{name}: embedding not a lattice hom")
    });
    r.check(d.preserves_f, || {
        format!("{name}: embedding does not preserve the operator")
    });
    r.check(d.preserves_g, || {
        format!("{name}: embedding does not preserve the dual operator")
    });
    r.check(d.dense, || format!("{name}: completion not dense"));
    r.check(d.compact, || format!("{name}: completion not compact"));
    r.check(d.surjective, || {
        format!("{name}: finite embedding not onto")
    });

    let lower = lower_extension(a, &theta).unwrap();
    r.check(&lower == theta.double_dual.f(), || {
        format!("{name}: lower extension differs from the induced operator")
    });
    let upper = upper_extension(a, &theta).unwrap();
    r.check(&upper == theta.double_dual.g(), || {
        format!("{name}: upper extension differs from the induced dual operator")
    });

    // carrier quasi-orders are inclusion of filters resp. ideals
    let fs = filters(a.lattice());
    let is = ideals(a.lattice());
    let qx = theta.canonical.base().quasi_order(Side::X);
    let qy = theta.canonical.base().quasi_order(Side::Y);
    let mut ok = true;
    for p in 0..fs.len() {
        for q in 0..fs.len() {
            if qx.holds(p, q) != fs[p].elements.is_subset(&fs[q].elements) {
                ok = false;
            }
        }
    }
    for p in 0..is.len() {
        for q in 0..is.len() {
            if qy.holds(p, q) != is[p].elements.is_subset(&is[q].elements) {
                ok = false;
            }
        }
    }
    r.check(ok, || {
        format!("{name}: canonical quasi-orders are not inclusion")
    });
}

fn fixture_morphism_pool() -> Vec<(usize, usize, Vec<BoundedMorphism>)> {
    let omegas = fixtures::fixture_omegas();
    let mut pools = Vec::new();
    for (si, (_, src)) in omegas.iter().enumerate() {
        for (di, (_, dst)) in omegas.iter().enumerate() {
            let pool = sample::all_morphisms(src, dst).unwrap();
            pools.push((si, di, pool));
        }
    }
    pools
}

/// Dual homomorphisms of seeded certified morphisms: algebraic validity,
/// the surjective/injective exchanges, derivation-equation agreement, the
/// polarity-preservation equivalences, and functoriality.
pub fn morphism_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut r = SuiteReport::new("morphism-duality");
    let mut rng = SplitMix64::new(seed);
    let pools = fixture_morphism_pool();
    let flat: Vec<&BoundedMorphism> = pools.iter().flat_map(|(_, _, pool)| pool.iter()).collect();
    assert!(!flat.is_empty());

    for i in 0..samples {
        let m = flat[rng.below(flat.len())];
        let h = dual_hom(m, DEFAULT_CAP).unwrap();
        r.check(is_homomorphism(&h).is_empty(), || {
            format!("sample {i}: dual map is not a homomorphism")
        });

        let alpha_surjective = {
            let img = m.alpha_image();
            img.len() == m.target.base().x_size()
        };
        let alpha_injective = {
            let mut sorted = m.alpha.clone();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        };
        let dual_injective = {
            let mut seen = alloc::collections::BTreeMap::new();
            h.map.iter().all(|&v| seen.insert(v, ()).is_none())
        };
        let dual_surjective = {
            let mut hit = vec![false; h.target.lattice().size()];
            for &v in &h.map {
                hit[v] = true;
            }
            hit.iter().all(|&b| b)
        };
        r.check(!alpha_surjective || dual_injective, || {
            format!("sample {i}: surjective carrier map without injective dual")
        });
        r.check(!alpha_injective || dual_surjective, || {
            format!("sample {i}: injective carrier map without surjective dual")
        });

        let eq = equiv_conditions(m, DEFAULT_CAP).unwrap();
        r.check(eq.agrees() && eq.rho_equation && eq.lam_equation, || {
            format!("sample {i}: derivation equations disagree with conditions")
        });

        // preservation of the relation ⇔ either carrier map reflects order
        let preserves_r = (0..m.source.base().x_size()).all(|x| {
            (0..m.source.base().y_size()).all(|y| {
                !m.source.base().relates(x, y) || m.target.base().relates(m.alpha[x], m.beta[y])
            })
        });
        let qsx = m.source.base().quasi_order(Side::X);
        let qdx = m.target.base().quasi_order(Side::X);
        let alpha_reflects = (0..m.source.base().x_size()).all(|x| {
            (0..m.source.base().x_size())
                .all(|z| !qdx.holds(m.alpha[x], m.alpha[z]) || qsx.holds(x, z))
        });
        let qsy = m.source.base().quasi_order(Side::Y);
        let qdy = m.target.base().quasi_order(Side::Y);
        let beta_reflects = (0..m.source.base().y_size()).all(|y| {
            (0..m.source.base().y_size())
                .all(|w| !qdy.holds(m.beta[y], m.beta[w]) || qsy.holds(y, w))
        });
        r.check(
            preserves_r == alpha_reflects && preserves_r == beta_reflects,
            || format!("sample {i}: preservation/reflection equivalence fails"),
        );
    }

    // functor laws
    for (_, op) in fixtures::fixture_omegas() {
        let id = identity(&op);
        let h = dual_hom(&id, DEFAULT_CAP).unwrap();
        let expect: Vec<usize> = (0..h.source.lattice().size()).collect();
        r.check(h.map == expect, || {
            String::from("identity dual is not the identity")
        });
    }
    let mut composed_checks = 0;
    'outer: for (s1, d1, pool1) in &pools {
        for (s2, d2, pool2) in &pools {
            if d1 != s2 || pool1.is_empty() || pool2.is_empty() {
                continue;
            }
            let _ = (s1, d2);
            for _ in 0..2 {
                let f = &pool1[rng.below(pool1.len())];
                let g = &pool2[rng.below(pool2.len())];
                let fg = compose(f, g).unwrap();
                let dual_fg = dual_hom(&fg, DEFAULT_CAP).unwrap();
                let dual_f = dual_hom(f, DEFAULT_CAP).unwrap();
                let dual_g = dual_hom(g, DEFAULT_CAP).unwrap();
                let composed: Vec<usize> = dual_g.map.iter().map(|&i| dual_f.map[i]).collect();
                r.check(dual_fg.map == composed, || {
                    String::from("dual of a composite is not the reversed composite")
                });
                composed_checks += 1;
                if composed_checks >= 24 {
                    break 'outer;
                }
            }
        }
    }
    r
}

/// Images are inner substructures, their duals are onto, and injective
/// relation-preserving morphisms corestrict to isomorphisms — for every
/// certified morphism between the fixtures.
pub fn inner_image_suite() -> SuiteReport {
    let mut r = SuiteReport::new("inner-substructures");
    let pools = fixture_morphism_pool();
    let flat: Vec<&BoundedMorphism> = pools.iter().flat_map(|(_, _, pool)| pool.iter()).collect();

    for (i, m) in flat.iter().enumerate() {
        let m = *m;
        let info = image(m).unwrap();
        r.check(info.inclusion_cert.all_pass(), || {
            format!("sample {i}: image is not an inner substructure")
        });

        // the induced restriction map is onto the image's lattice
        let inclusion = BoundedMorphism {
            source: info.structure.clone(),
            target: m.target.clone(),
            alpha: info.x_members.clone(),
            beta: info.y_members.clone(),
        };
        let h = dual_hom(&inclusion, DEFAULT_CAP).unwrap();
        let mut hit = vec![false; h.target.lattice().size()];
        for &v in &h.map {
            hit[v] = true;
        }
        r.check(hit.iter().all(|&b| b), || {
            format!("sample {i}: restriction dual is not onto")
        });

        let alpha_inj = {
            let mut s = m.alpha.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        };
        let beta_inj = {
            let mut s = m.beta.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        };
        if alpha_inj && beta_inj {
            if let Some(iso) = &info.source_iso {
                r.check(is_isomorphism(iso), || {
                    format!("sample {i}: injective corestriction is not an isomorphism")
                });
            }
            // preservation may still fail, in which case no iso is claimed
        }
    }
    r
}

/// Duals of seeded NLO homomorphisms: certification, the injective ↔
/// surjective exchanges, the isomorphism onto the image for surjective
/// homs, and the double-dual correspondence.
pub fn hom_dual_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut r = SuiteReport::new("hom-duality");
    let mut rng = SplitMix64::new(seed);
    let lattices = fixtures::fixture_lattices();
    let mut pool: Vec<Homomorphism> = Vec::new();
    for (_, l) in &lattices {
        for (_, m) in &lattices {
            for map in sample::all_lattice_homs(l, m) {
                pool.push(Homomorphism {
                    source: fixtures::identity_nlo(l.clone()),
                    target: fixtures::identity_nlo(m.clone()),
                    map,
                });
            }
        }
    }
    assert!(!pool.is_empty());

    for i in 0..samples {
        let h = &pool[rng.below(pool.len())];
        r.check(is_homomorphism(h).is_empty(), || {
            format!("sample {i}: enumerated hom fails validation")
        });
        let dual = dual_of_hom(h).unwrap();
        r.check(verify(&dual).all_pass(), || {
            format!("sample {i}: dual pair is not a bounded morphism")
        });

        let inj = {
            let mut s = h.map.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        };
        let surj = {
            let mut hit = vec![false; h.target.lattice().size()];
            for &v in &h.map {
                hit[v] = true;
            }
            hit.iter().all(|&b| b)
        };
        if inj {
            let alpha_surj = dual.alpha_image().len() == dual.target.base().x_size();
            let beta_surj = dual.beta_image().len() == dual.target.base().y_size();
            r.check(alpha_surj && beta_surj, || {
                format!("sample {i}: injective hom without surjective dual maps")
            });
        }
        if surj {
            let alpha_inj = {
                let mut s = dual.alpha.clone();
                s.sort_unstable();
                s.windows(2).all(|w| w[0] != w[1])
            };
            r.check(alpha_inj, || {
                format!("sample {i}: surjective hom without injective dual maps")
            });
            let info = image(&dual).unwrap();
            r.check(
                info.source_iso
                    .as_ref()
                    .map(is_isomorphism)
                    .unwrap_or(false),
                || format!("sample {i}: dual is not isomorphic onto its image"),
            );
        }
    }

    // double-dual correspondence on chain-into-diamond and the projection back
    let ch2 = fixtures::identity_nlo(fixtures::ch2());
    let diamond = fixtures::identity_nlo(fixtures::diamond());
    let cases = [
        Homomorphism {
            source: ch2.clone(),
            target: diamond.clone(),
            map: vec![0, 3],
        },
        Homomorphism {
            source: diamond.clone(),
            target: ch2.clone(),
            map: vec![0, 1, 0, 1],
        },
    ];
    for (ci, h) in cases.iter().enumerate() {
        r.check(is_homomorphism(h).is_empty(), || {
            format!("case {ci}: not a hom")
        });
        let dual = dual_of_hom(h).unwrap();
        let dd = dual_hom(&dual, DEFAULT_CAP).unwrap();
        let te_l = theta_embedding(&h.source).unwrap();
        let te_m = theta_embedding(&h.target).unwrap();
        let mut ok = true;
        for a in 0..h.source.lattice().size() {
            if dd.map[te_l.map[a]] != te_m.map[h.map[a]] {
                ok = false;
            }
        }
        r.check(ok, || format!("case {ci}: double dual does not correspond"));
    }

    // surjective hom: dual embeds the source canonical structure as an
    // inner substructure (projection diamond ↠ ch2)
    let proj = &cases[1];
    let dual = dual_of_hom(proj).unwrap();
    let info = image(&dual).unwrap();
    r.check(info.inclusion_cert.all_pass(), || {
        String::from("projection dual image is not inner")
    });
    r.check(
        info.source_iso
            .as_ref()
            .map(is_isomorphism)
            .unwrap_or(false),
        || String::from("projection dual is not an embedding"),
    );
    r
}

/// Direct sums: the stable lattice of a sum is the product of the stable
/// lattices, injections dualize to projections, summand order is
/// immaterial up to isomorphism, and the sum is a coproduct.
pub fn sums_suite() -> SuiteReport {
    let mut r = SuiteReport::new("direct-sums");
    let omegas = fixtures::fixture_omegas();

    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 1..=3usize {
        combos.extend(all_index_tuples(omegas.len(), len));
    }
    for combo in &combos {
        let summands: Vec<OmegaPolarity> = combo.iter().map(|&k| omegas[k].1.clone()).collect();
        let ds = crate::sum::direct_sum(&summands).unwrap();
        let iso = crate::sum::product_isomorphism(&ds, DEFAULT_CAP).unwrap();
        let expected: usize = combo
            .iter()
            .map(|&k| {
                enumerate_stable_capped(omegas[k].1.base(), DEFAULT_CAP)
                    .unwrap()
                    .len()
            })
            .product();
        r.check(iso.total_elements.len() == expected, || {
            format!(
                "combo {combo:?}: lattice size {} ≠ {expected}",
                iso.total_elements.len()
            )
        });
        r.check(iso.bijective, || {
            format!("combo {combo:?}: mediator not bijective")
        });
        r.check(iso.hom_report.is_empty(), || {
            format!("combo {combo:?}: mediator not a homomorphism")
        });
        r.check(iso.inverse_stable, || {
            format!("combo {combo:?}: componentwise unions not stable")
        });

        // injections certify; their duals are the product projections
        for (k, _) in combo.iter().enumerate() {
            let inj = crate::sum::injection(&ds, k).unwrap();
            r.check(verify(&inj).all_pass(), || {
                format!("combo {combo:?}: injection {k} fails")
            });
            let h = dual_hom(&inj, DEFAULT_CAP).unwrap();
            let mut ok = true;
            for (idx, &flat) in iso.map.iter().enumerate() {
                let locals = unflatten(flat, &iso.factor_sizes);
                if h.map[idx] != locals[k] {
                    ok = false;
                }
            }
            r.check(ok, || {
                format!("combo {combo:?}: dual of injection {k} is not the projection")
            });
        }
    }

    // summand order permutation gives an isomorphic sum
    let le2 = omegas[1].1.clone();
    let neq3 = omegas[0].1.clone();
    let ab = crate::sum::direct_sum(&[neq3.clone(), le2.clone()]).unwrap();
    let ba = crate::sum::direct_sum(&[le2.clone(), neq3.clone()]).unwrap();
    let perm = BoundedMorphism {
        source: ab.total.clone(),
        target: ba.total.clone(),
        alpha: vec![2, 3, 4, 0, 1],
        beta: vec![2, 3, 4, 0, 1],
    };
    r.check(is_isomorphism(&perm), || {
        String::from("summand permutation is not an isomorphism")
    });

    // coproduct: factorization and uniqueness by exhaustive search
    coproduct_checks(&mut r);
    r
}

fn coproduct_checks(r: &mut SuiteReport) {
    let le2 = fixtures::with_r_relations(&fixtures::le2());
    let empty2 = fixtures::with_r_relations(&fixtures::empty2());

    // identities out of le2 ⊕ le2
    let ds = crate::sum::direct_sum(&[le2.clone(), le2.clone()]).unwrap();
    let fam = [identity(&le2), identity(&le2)];
    exhaustive_mediator_unique(r, &ds, &fam, "le2+le2");

    // mixed: identity and the constant morphism out of empty2
    let ds = crate::sum::direct_sum(&[le2.clone(), empty2.clone()]).unwrap();
    let const_m = BoundedMorphism {
        source: empty2,
        target: le2.clone(),
        alpha: vec![1, 1],
        beta: vec![0, 0],
    };
    assert!(verify(&const_m).all_pass());
    let fam = [identity(&le2), const_m];
    exhaustive_mediator_unique(r, &ds, &fam, "le2+empty2");
}

fn exhaustive_mediator_unique(
    r: &mut SuiteReport,
    ds: &crate::sum::DirectSum,
    fam: &[BoundedMorphism],
    label: &str,
) {
    let mediator = crate::sum::coproduct_mediator(ds, fam).unwrap();
    r.check(verify(&mediator).all_pass(), || {
        format!("{label}: mediator not bounded")
    });
    for (k, phi) in fam.iter().enumerate() {
        let inj = crate::sum::injection(ds, k).unwrap();
        let through = compose(&inj, &mediator).unwrap();
        r.check(
            through.alpha == phi.alpha && through.beta == phi.beta,
            || format!("{label}: factorization fails at summand {k}"),
        );
    }
    // exhaustive uniqueness among all candidate map pairs
    let target = &fam[0].target;
    let mut matches = 0;
    for alpha in sample::all_maps(ds.total.base().x_size(), target.base().x_size()) {
        for beta in sample::all_maps(ds.total.base().y_size(), target.base().y_size()) {
            let cand = BoundedMorphism {
                source: ds.total.clone(),
                target: target.clone(),
                alpha: alpha.clone(),
                beta,
            };
            if !verify(&cand).all_pass() {
                continue;
            }
            let factors = (0..fam.len()).all(|k| {
                let inj = crate::sum::injection(ds, k).unwrap();
                let through = compose(&inj, &cand).unwrap();
                through.alpha == fam[k].alpha && through.beta == fam[k].beta
            });
            if factors {
                matches += 1;
                r.check(
                    cand.alpha == mediator.alpha && cand.beta == mediator.beta,
                    || format!("{label}: a second factorizing morphism exists"),
                );
            }
        }
    }
    r.check(matches == 1, || {
        format!("{label}: expected exactly one mediator, found {matches}")
    });
}

fn all_index_tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..base {
                let mut item = prefix.clone();
                item.push(k);
                next.push(item);
            }
        }
        out = next;
    }
    out
}

fn unflatten(mut flat: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        out[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    out
}

/// The two hand-built instances over the two-chain: a non-surjective yet
/// maximal covering morphism whose dual is injective, and a failing one
/// whose dual in fact collapses.
pub fn maximal_covering_suite() -> SuiteReport {
    let mut r = SuiteReport::new("maximal-covering");
    let nlo = fixtures::identity_nlo(fixtures::ch2());
    let cs = canonical_structure(&nlo).unwrap();

    // singleton structure with empty relations
    let p1 = {
        let base = Polarity::from_fn(1, 1, |_, _| false);
        let s = RelS::empty(1, 1, 1).unwrap();
        let t = RelT::empty(1, 1, 1).unwrap();
        OmegaPolarity::new(base, s, t).unwrap()
    };
    let covering = BoundedMorphism {
        source: p1,
        target: cs.clone(),
        alpha: vec![1], // the filter [1), the only i-maximal one
        beta: vec![0],
    };
    r.check(verify(&covering).all_pass(), || {
        String::from("covering instance not bounded")
    });
    r.check(is_maximal_covering(&covering, &nlo).unwrap(), || {
        String::from("covering instance not recognized")
    });
    r.check(covering.alpha_image().len() < cs.base().x_size(), || {
        String::from("covering instance should not be surjective")
    });
    let h = dual_hom(&covering, DEFAULT_CAP).unwrap();
    let injective = {
        let mut seen = alloc::collections::BTreeMap::new();
        h.map.iter().all(|&v| seen.insert(v, ()).is_none())
    };
    r.check(injective, || String::from("covering dual not injective"));

    // singleton structure with full relations, mapped onto the bottom filter
    let p2 = {
        let base = Polarity::from_fn(1, 1, |_, _| true);
        let s = RelS::full(1, 1, 1).unwrap();
        let t = RelT::full(1, 1, 1).unwrap();
        OmegaPolarity::new(base, s, t).unwrap()
    };
    let failing = BoundedMorphism {
        source: p2,
        target: cs.clone(),
        alpha: vec![0],
        beta: vec![1],
    };
    r.check(verify(&failing).all_pass(), || {
        String::from("failing instance not bounded")
    });
    r.check(!is_maximal_covering(&failing, &nlo).unwrap(), || {
        String::from("failing instance wrongly recognized as covering")
    });
    let h = dual_hom(&failing, DEFAULT_CAP).unwrap();
    let collapsed = {
        let mut seen = alloc::collections::BTreeMap::new();
        !h.map.iter().all(|&v| seen.insert(v, ()).is_none())
    };
    r.check(collapsed, || {
        String::from("failing dual unexpectedly injective")
    });

    // a surjective carrier map is trivially covering: the identity on the
    // canonical structure
    let id = identity(&cs);
    r.check(is_maximal_covering(&id, &nlo).unwrap(), || {
        String::from("identity not recognized as covering")
    });
    let h = dual_hom(&id, DEFAULT_CAP).unwrap();
    let injective = {
        let mut seen = alloc::collections::BTreeMap::new();
        h.map.iter().all(|&v| seen.insert(v, ()).is_none())
    };
    r.check(injective, || String::from("identity dual not injective"));

    // an injective hom dualizes to a surjective-carrier morphism into the
    // chain's canonical structure, again covering with injective dual
    let diamond = fixtures::identity_nlo(fixtures::diamond());
    let emb = Homomorphism {
        source: nlo.clone(),
        target: diamond,
        map: vec![0, 3],
    };
    let dual = dual_of_hom(&emb).unwrap();
    r.check(is_maximal_covering(&dual, &nlo).unwrap(), || {
        String::from("dual of embedding not covering")
    });
    let h = dual_hom(&dual, DEFAULT_CAP).unwrap();
    let injective = {
        let mut seen = alloc::collections::BTreeMap::new();
        h.map.iter().all(|&v| seen.insert(v, ()).is_none())
    };
    r.check(injective, || {
        String::from("dual of embedding has non-injective dual")
    });
    r
}

/// The all-plain reduction of the ε machinery, and the conjectured
/// preservation behaviour of mixed-type operators on stable-sectioned
/// relations.
pub fn eps_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("eps-operators");
    let mut rng = SplitMix64::new(seed);

    for (name, op) in fixtures::fixture_omegas() {
        let s_eps = RelSEps::from_rel_s(op.base(), op.s()).unwrap();
        r.check(validate_eps_sections(op.base(), &s_eps).unwrap(), || {
            format!("{name}: plain relation fails eps validation")
        });
        let lat = enumerate_stable_capped(op.base(), DEFAULT_CAP).unwrap();
        for a in lat.elements() {
            let via_eps = f_s_eps(op.base(), &s_eps, core::slice::from_ref(a)).unwrap();
            let via_plain = op.f_s(core::slice::from_ref(a)).unwrap();
            r.check(via_eps == via_plain, || {
                format!("{name}: all-plain evaluation differs")
            });
        }

        // the product order over all-plain coordinates is the plain order
        let eps2 = MonotonicityType::all_one(2);
        let order = eps_quasi_order(op.base(), &eps2).unwrap();
        let qx = op.base().quasi_order(Side::X);
        let mut ok = true;
        for (ai, a) in order.tuples.iter().enumerate() {
            for (bi, b) in order.tuples.iter().enumerate() {
                let expect = qx.holds(a[0], b[0]) && qx.holds(a[1], b[1]);
                if order.holds(ai, bi) != expect {
                    ok = false;
                }
            }
        }
        r.check(ok, || format!("{name}: all-plain product order differs"));

        // morphism verdicts agree with the plain checker on every candidate
        // carrier-map pair (witnesses included)
        let eps1 = MonotonicityType::all_one(1);
        for alpha in sample::all_maps(op.base().x_size(), op.base().x_size()) {
            for beta in sample::all_maps(op.base().y_size(), op.base().y_size()) {
                let m = BoundedMorphism {
                    source: op.clone(),
                    target: op.clone(),
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                };
                let plain = verify(&m);
                let eps_cert = crate::quasi::verify_eps_morphism(
                    op.base(),
                    op.base(),
                    &alpha,
                    &beta,
                    &s_eps,
                    &s_eps,
                    &eps1,
                )
                .unwrap();
                r.check(
                    eps_cert.back_s == plain.back_s && eps_cert.forth_s == plain.forth_s,
                    || format!("{name}: eps verdicts differ from plain checker"),
                );
            }
        }
    }

    // conjecture: joins preserved in plain coordinates, meets sent to joins
    // in dual ones, over seeded stable-sectioned mixed relations
    for (name, p) in [("le2", fixtures::le2()), ("neq3", fixtures::neq3())] {
        let lat = enumerate_stable_capped(&p, DEFAULT_CAP).unwrap();
        for eps in [
            MonotonicityType(vec![Eps::Partial]),
            MonotonicityType(vec![Eps::One, Eps::Partial]),
        ] {
            for _ in 0..4 {
                let s = sample::random_rel_s_eps(eps.clone(), &p, &mut rng).unwrap();
                if !validate_eps_sections(&p, &s).unwrap() {
                    r.check(false, || {
                        format!("{name}: stabilization left a bad section")
                    });
                    continue;
                }
                for i in 0..eps.arity() {
                    for ctx in all_tuples(lat.len(), eps.arity()) {
                        if ctx[i] != 0 {
                            continue;
                        }
                        for a in 0..lat.len() {
                            for b in 0..lat.len() {
                                let mut args: Vec<BitSet> = ctx
                                    .iter()
                                    .map(|&c| lat.element(c).unwrap().clone())
                                    .collect();
                                let combined = match eps.coord(i) {
                                    Eps::One => lat.join2(a, b).unwrap(),
                                    Eps::Partial => lat.meet2(a, b).unwrap(),
                                };
                                args[i] = lat.element(combined).unwrap().clone();
                                let lhs = f_s_eps(&p, &s, &args).unwrap();
                                args[i] = lat.element(a).unwrap().clone();
                                let va = lat.index_of(&f_s_eps(&p, &s, &args).unwrap()).unwrap();
                                args[i] = lat.element(b).unwrap().clone();
                                let vb = lat.index_of(&f_s_eps(&p, &s, &args).unwrap()).unwrap();
                                let rhs = lat.join2(va, vb).unwrap();
                                r.check(lat.index_of(&lhs) == Some(rhs), || {
                                    format!("{name}: eps preservation fails in coordinate {i}")
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    r
}

/// Runs every suite with the standard sample counts.
pub fn run_all(size: usize, seed: u64) -> Vec<SuiteReport> {
    vec![
        galois_suite(size),
        stable_lattice_suite(seed, 100, 10),
        operator_suite(seed, 200),
        adjunction_suite(),
        canonical_suite(seed, 50),
        morphism_suite(seed, 100),
        inner_image_suite(),
        hom_dual_suite(seed, 50),
        sums_suite(),
        maximal_covering_suite(),
        eps_suite(seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_oracles_match_on_fixtures() {
        for (_, op) in fixtures::fixture_omegas() {
            let lat = enumerate_stable_capped(op.base(), DEFAULT_CAP).unwrap();
            for a in lat.elements() {
                assert_eq!(
                    op.f_s(&[a.clone()]).unwrap(),
                    f_s_first_order(op.base(), op.s(), &[a.clone()])
                );
                assert_eq!(
                    op.g_t(&[a.clone()]).unwrap(),
                    g_t_first_order(op.base(), op.t(), &[a.clone()])
                );
            }
        }
    }

    #[test]
    fn small_galois_suite_passes() {
        let r = galois_suite(2);
        assert!(r.passed(), "{:?}", r.failures);
    }
}
