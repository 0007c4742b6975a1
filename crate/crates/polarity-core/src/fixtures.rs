//! Small reference structures used by the self-check suites and tests.

use crate::bits::BitMatrix;
use crate::nlo::{FiniteLattice, OmegaNlo, OpTable};
use crate::omega::{OmegaPolarity, RelS, RelT};
use crate::polarity::Polarity;

/// `({0,1,2}, {0,1,2}, ≠)` — every subset is stable, so the stable-set
/// lattice is the full Boolean cube.
pub fn neq3() -> Polarity {
    neq(3)
}

pub fn neq(n: usize) -> Polarity {
    Polarity::from_fn(n, n, |x, y| x != y)
}

/// `({0,1}, {0,1}, ≤)` — a two-element chain of stable sets.
pub fn le2() -> Polarity {
    Polarity::from_fn(2, 2, |x, y| x <= y)
}

/// `({0,1}, {0,1}, ∅)`.
pub fn empty2() -> Polarity {
    Polarity::from_fn(2, 2, |_, _| false)
}

/// Expands a polarity to an Ω-polarity with `S = T = R` (both unary).
/// R-sections are singleton derivations, hence always stable.
pub fn with_r_relations(p: &Polarity) -> OmegaPolarity {
    let s = RelS::from_polarity(p);
    let t = RelT::from_polarity(p);
    OmegaPolarity::new(p.clone(), s, t).expect("R-sections are stable")
}

fn lattice_from_pairs(size: usize, leq_pairs: &[(usize, usize)]) -> FiniteLattice {
    let leq = BitMatrix::from_fn(size, size, |a, b| a == b || leq_pairs.contains(&(a, b)));
    FiniteLattice::from_leq(leq).expect("fixture order is a lattice")
}

/// One-element lattice.
pub fn one() -> FiniteLattice {
    lattice_from_pairs(1, &[])
}

/// Chain 0 < 1 < … < n−1.
pub fn chain(n: usize) -> FiniteLattice {
    let leq = BitMatrix::from_fn(n, n, |a, b| a <= b);
    FiniteLattice::from_leq(leq).expect("a chain is a lattice")
}

/// Two-element chain 0 < 1.
pub fn ch2() -> FiniteLattice {
    lattice_from_pairs(2, &[(0, 1)])
}

/// 2×2 diamond: bottom 0, incomparable atoms 1, 2, top 3.
pub fn diamond() -> FiniteLattice {
    lattice_from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])
}

/// Pentagon: 0 < 1 < 3 < 4 and 0 < 2 < 4.
pub fn n5() -> FiniteLattice {
    lattice_from_pairs(
        5,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 3),
            (1, 4),
            (3, 4),
            (2, 4),
        ],
    )
}

/// Three incomparable atoms 1, 2, 3 between bottom 0 and top 4.
pub fn m3() -> FiniteLattice {
    lattice_from_pairs(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)])
}

/// The lattice with identity operator and identity dual operator.
pub fn identity_nlo(lattice: FiniteLattice) -> OmegaNlo {
    let f = OpTable::identity(lattice.size());
    let g = OpTable::identity(lattice.size());
    OmegaNlo::new(lattice, f, g).expect("identity is a normal (dual) operator")
}

/// The four fixture lattices named throughout the test suites.
pub fn fixture_lattices() -> [(&'static str, FiniteLattice); 4] {
    [
        ("ch2", ch2()),
        ("diamond", diamond()),
        ("n5", n5()),
        ("m3", m3()),
    ]
}

/// The three fixture polarities, expanded with `S = T = R`.
pub fn fixture_omegas() -> [(&'static str, OmegaPolarity); 3] {
    [
        ("neq3", with_r_relations(&neq3())),
        ("le2", with_r_relations(&le2())),
        ("empty2", with_r_relations(&empty2())),
    ]
}
