//! Property tests for the core laws over randomly drawn structures, with
//! brute-force oracles independent of the production code paths.

use proptest::prelude::*;

use polarity_core::bits::BitSet;
use polarity_core::checks::{brute_force_stable, f_s_first_order, g_t_first_order};
use polarity_core::lattice::enumerate_stable;
use polarity_core::omega::{validate_sections, OmegaPolarity};
use polarity_core::sample::{stabilize_rel_s, stabilize_rel_t};
use polarity_core::{Polarity, RelS, RelT, Side};

fn polarity_strategy(max: usize) -> impl Strategy<Value = Polarity> {
    (1..=max, 1..=max).prop_flat_map(|(x, y)| {
        proptest::collection::vec(any::<bool>(), x * y)
            .prop_map(move |bits| Polarity::from_fn(x, y, |a, b| bits[a * y + b]))
    })
}

fn subset_strategy(width: usize) -> impl Strategy<Value = BitSet> {
    proptest::collection::vec(any::<bool>(), width).prop_map(move |bits| {
        let mut s = BitSet::empty(width);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.insert(i);
            }
        }
        s
    })
}

proptest! {
    #[test]
    fn galois_adjunction(p in polarity_strategy(5)) {
        let xs = p.x_size();
        let ys = p.y_size();
        for amask in 0u32..(1 << xs) {
            let a = mask_set(xs, amask);
            let rho = p.rho(&a).unwrap();
            for bmask in 0u32..(1 << ys) {
                let b = mask_set(ys, bmask);
                let lam = p.lam(&b).unwrap();
                prop_assert_eq!(a.is_subset(&lam), b.is_subset(&rho));
            }
        }
    }

    #[test]
    fn enumeration_matches_subset_filter(p in polarity_strategy(6)) {
        let lat = enumerate_stable(&p).unwrap();
        let oracle = brute_force_stable(&p, Side::X);
        prop_assert_eq!(lat.elements(), &oracle[..]);
        // strictly increasing in lectic order
        for w in lat.elements().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn closure_is_extensive_monotone_idempotent(
        p in polarity_strategy(5),
        bits in proptest::collection::vec(any::<bool>(), 5),
    ) {
        let width = p.x_size();
        let mut a = BitSet::empty(width);
        for i in 0..width {
            if bits[i] {
                a.insert(i);
            }
        }
        let c = p.close(Side::X, &a).unwrap();
        prop_assert!(a.is_subset(&c));
        prop_assert_eq!(p.close(Side::X, &c).unwrap(), c.clone());
        let mut bigger = a.clone();
        bigger.union_with(&BitSet::singleton(width, 0));
        let cb = p.close(Side::X, &bigger).unwrap();
        prop_assert!(c.is_subset(&cb));
    }

    #[test]
    fn stabilized_relations_are_omega_polarities(
        p in polarity_strategy(3),
        smask in any::<u64>(),
        tmask in any::<u64>(),
        n in 0usize..=2,
        m in 0usize..=2,
    ) {
        let mut s = RelS::empty(n, p.x_size(), p.y_size()).unwrap();
        let mut i = 0;
        for xs in tuple_space(p.x_size(), n) {
            for y in 0..p.y_size() {
                if smask >> (i % 64) & 1 == 1 {
                    s = with_s(&s, &xs, y, &p);
                }
                i += 1;
            }
        }
        let mut t = RelT::empty(m, p.x_size(), p.y_size()).unwrap();
        let mut i = 0;
        for x in 0..p.x_size() {
            for ys in tuple_space(p.y_size(), m) {
                if tmask >> (i % 64) & 1 == 1 {
                    t = with_t(&t, x, &ys, &p);
                }
                i += 1;
            }
        }
        let s = stabilize_rel_s(&p, &s).unwrap();
        let t = stabilize_rel_t(&p, &t).unwrap();
        prop_assert!(validate_sections(&p, &s, &t).unwrap().is_empty());

        // induced operations agree with their first-order readings
        let op = OmegaPolarity::new(p.clone(), s, t).unwrap();
        let lat = enumerate_stable(&p).unwrap();
        let pick = |k: usize| lat.element(k % lat.len()).unwrap().clone();
        let args: Vec<BitSet> = (0..n).map(pick).collect();
        prop_assert_eq!(
            op.f_s(&args).unwrap(),
            f_s_first_order(&p, op.s(), &args)
        );
        let args: Vec<BitSet> = (0..m).map(pick).collect();
        prop_assert_eq!(
            op.g_t(&args).unwrap(),
            g_t_first_order(&p, op.t(), &args)
        );
    }

    #[test]
    fn derivations_of_anything_are_stable(p in polarity_strategy(5), a in subset_strategy(5)) {
        if a.width() == p.x_size() {
            let rho = p.rho(&a).unwrap();
            prop_assert!(p.is_stable(Side::Y, &rho).unwrap());
        }
    }
}

fn mask_set(width: usize, mask: u32) -> BitSet {
    let mut s = BitSet::empty(width);
    for i in 0..width {
        if mask >> i & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

fn tuple_space(size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..size {
                let mut item = prefix.clone();
                item.push(v);
                next.push(item);
            }
        }
        out = next;
    }
    if arity > 0 && size == 0 {
        return Vec::new();
    }
    out
}

fn with_s(s: &RelS, xs: &[usize], y: usize, p: &Polarity) -> RelS {
    let mut list = s.tuple_list();
    list.push((xs.to_vec(), y));
    RelS::from_tuples(s.arity(), p.x_size(), p.y_size(), &list).unwrap()
}

fn with_t(t: &RelT, x: usize, ys: &[usize], p: &Polarity) -> RelT {
    let mut list = t.tuple_list();
    list.push((x, ys.to_vec()));
    RelT::from_tuples(t.arity(), p.x_size(), p.y_size(), &list).unwrap()
}
