//! Finite polarities, their stable set lattices, relation-induced operators,
//! canonical extensions, bounded morphisms and direct sums — with brute-force
//! verification suites for all of the structural laws on desk-scale instances.
//!
//! The crate is `no_std` (alloc only); all values are immutable after
//! construction and every operation is pure, so everything is safe to share
//! across threads.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bits;
pub mod checks;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod morphism;
pub mod nlo;
pub mod omega;
pub mod polarity;
pub mod quasi;
pub mod rng;
pub mod sample;
pub mod sum;

pub use bits::{BitMatrix, BitSet};
pub use error::{Error, Result};
pub use lattice::{enumerate_stable, enumerate_stable_capped, StableLattice, DEFAULT_CAP};
pub use omega::{validate_sections, OmegaPolarity, RelS, RelT};
pub use polarity::{Polarity, QuasiOrder, Side};
