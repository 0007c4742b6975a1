//! Error type shared by all modules.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A subset's width does not match the carrier it is used against.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// An element or lattice index is out of range.
    IndexOutOfRange {
        index: usize,
        size: usize,
    },
    /// A relation, tuple or operator table has the wrong arity.
    ArityMismatch {
        expected: usize,
        found: usize,
    },
    /// An operation required a stable set and was given an unstable one.
    NotStable,
    /// An enumeration would exceed the configured element cap.
    CapacityExceeded {
        cap: usize,
    },
    /// An operator table fails join/bottom preservation; the witness names
    /// the coordinate and the violated join `f(a⃗[b∨c/i]) ≠ f(a⃗[b/i]) ∨ f(a⃗[c/i])`.
    NotNormalOperator {
        coord: usize,
        witness: Vec<usize>,
    },
    /// A dual operator table fails meet/top preservation.
    NotNormalDualOperator {
        coord: usize,
        witness: Vec<usize>,
    },
    /// A map expected to be a (certified) morphism or homomorphism is not.
    NotCertified(&'static str),
    /// Inversion was requested for a morphism that is not an isomorphism.
    NotIsomorphism,
    /// The claimed substructure does not restrict the larger structure.
    NotSubstructure(String),
    /// A subset is not a filter / ideal of the lattice at hand.
    NotFilter,
    NotIdeal,
    /// Source/target structures of composed arrows do not match.
    CompositionMismatch,
    /// The given leq matrix is not a (bounded) lattice order.
    NotLattice(String),
    /// A compact monotonicity-type string holds something besides `1`/`d`.
    InvalidEpsCharacter(char),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(
                    f,
                    "dimension mismatch: expected width {expected}, found {found}"
                )
            }
            Error::IndexOutOfRange { index, size } => {
                write!(f, "index {index} out of range for carrier of size {size}")
            }
            Error::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {expected}, found {found}")
            }
            Error::NotStable => write!(f, "argument is not a stable set"),
            Error::CapacityExceeded { cap } => {
                write!(
                    f,
                    "stable-set enumeration exceeds the cap of {cap} elements"
                )
            }
            Error::NotNormalOperator { coord, witness } => {
                write!(
                    f,
                    "table is not a normal operator in coordinate {coord} (witness {witness:?})"
                )
            }
            Error::NotNormalDualOperator { coord, witness } => {
                write!(f, "table is not a normal dual operator in coordinate {coord} (witness {witness:?})")
            }
            Error::NotCertified(what) => write!(f, "{what} is not a certified morphism"),
            Error::NotIsomorphism => write!(f, "morphism is not an isomorphism"),
            Error::NotSubstructure(why) => write!(f, "not a substructure: {why}"),
            Error::NotFilter => write!(f, "subset is not a nonempty filter"),
            Error::NotIdeal => write!(f, "subset is not a nonempty ideal"),
            Error::CompositionMismatch => write!(f, "composition endpoints do not match"),
            Error::NotLattice(why) => write!(f, "not a lattice: {why}"),
            Error::InvalidEpsCharacter(c) => {
                write!(
                    f,
                    "invalid monotonicity-type character {c:?}, expected '1' or 'd'"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
