//! Exact arithmetic for truncated formal multilinear function series over a
//! finite-dimensional unital algebra, together with the partition
//! combinatorics that drives their transform calculus.
//!
//! The crate is organized as follows:
//!
//! - [`algebra`]: the base algebra `B` — the rationals, or a full matrix
//!   algebra over the rationals — given by structure constants, with exact
//!   multiplication and inversion;
//! - [`mfs`]: truncated multilinear function series `(a_0, a_1, ..., a_N)`
//!   with formal sum, product, composition and both inverses;
//! - [`sym`]: the symmetrization operator, symmetric product/composition and
//!   the polar-part/diagonal correspondence with homogeneous polynomials;
//! - [`ncl`]: noncrossing, interval and noncrossing linked partitions, their
//!   partial orders, encodings, restrictions and bijections;
//! - [`fock`]: a truncated algebraic Fock space with creation, annihilation
//!   and transfer operators — an independent evaluation path for every
//!   moment formula in [`transforms`];
//! - [`transforms`]: partition-indexed moment sums, the unsymmetrized R-,
//!   T- and S-transforms, and free additive/multiplicative convolution;
//! - [`jsonio`]: canonical JSON (de)serialization for series and partitions;
//! - [`sample`]: seeded random test data with small exact coefficients.
//!
//! All coefficients are exact rationals ([`Rat`]); every identity asserted
//! by the test suite holds with zero tolerance.
//!
//! # Example
//!
//! Free cumulants of a semicircular element, computed from its moments and
//! cross-checked on the Fock space:
//!
//! ```
//! use mulffs::fock::{self, FockOperator};
//! use mulffs::transforms;
//! use mulffs::{rat_int, MFSeries};
//!
//! // the moment series (m_1, ..., m_5) of a standard semicircular element
//! let moments = MFSeries::from_rats(&[
//!     rat_int(0), rat_int(1), rat_int(0), rat_int(2), rat_int(0),
//! ]);
//!
//! // its free cumulant series is (0, 1, 0, 0, 0)
//! let cumulants = transforms::r_transform(&moments);
//! assert_eq!(
//!     cumulants.to_rats(),
//!     [0, 1, 0, 0, 0].map(rat_int).to_vec(),
//! );
//!
//! // the canonical variable with those cumulants reproduces the moments
//! let x = FockOperator::additive_canonical(1, &cumulants);
//! assert_eq!(fock::distribution_series(&[x], 4).unwrap(), moments);
//! ```

// index-juggling over structure-constant tables and partitions reads best
// with explicit indices
#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::sync::OnceLock;

pub mod algebra;
pub mod fock;
pub mod jsonio;
mod linalg;
pub mod mfs;
pub mod ncl;
pub mod sample;
pub mod sym;
pub mod transforms;

pub use algebra::{Algebra, AlgebraElement, AlgebraKind};
pub use mfs::{MFSeries, MultilinearMap};
pub use ncl::{Family, Partition};

/// Exact rational scalar used for every coefficient in the crate.
pub type Rat = num::BigRational;

/// Arbitrary-precision integer re-export, used for counting formulas.
pub type Int = num::BigInt;

/// Shorthand for a reduced rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// Rational from an integer.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(Int::from(p))
}

/// A reason a family of blocks fails to be a valid partition of the
/// requested kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    /// A block is empty.
    EmptyBlock,
    /// An element lies outside `1..=n`.
    OutOfRange { element: usize },
    /// Some element of `1..=n` is covered by no block.
    CoverageGap { element: usize },
    /// Some element is covered by three or more blocks.
    TripleCover { element: usize },
    /// Two blocks cross.
    Crossing {
        first: Vec<usize>,
        second: Vec<usize>,
    },
    /// Two blocks overlap without being nearly disjoint.
    NotNearlyDisjoint {
        element: usize,
        first: Vec<usize>,
        second: Vec<usize>,
    },
    /// An element is shared between two blocks (forbidden for plain
    /// noncrossing and interval partitions).
    SharedElement { element: usize },
    /// A block is not an interval (interval-partition mode).
    NotInterval { block: Vec<usize> },
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::EmptyBlock => write!(f, "empty block"),
            PartitionDefect::OutOfRange { element } => {
                write!(f, "element {element} outside the ground set")
            }
            PartitionDefect::CoverageGap { element } => {
                write!(f, "element {element} not covered by any block")
            }
            PartitionDefect::TripleCover { element } => {
                write!(f, "element {element} covered by more than two blocks")
            }
            PartitionDefect::Crossing { first, second } => {
                write!(f, "blocks {first:?} and {second:?} cross")
            }
            PartitionDefect::NotNearlyDisjoint {
                element,
                first,
                second,
            } => write!(
                f,
                "blocks {first:?} and {second:?} share {element} without being nearly disjoint"
            ),
            PartitionDefect::SharedElement { element } => {
                write!(f, "element {element} shared between blocks")
            }
            PartitionDefect::NotInterval { block } => {
                write!(f, "block {block:?} is not an interval")
            }
        }
    }
}

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two values live over different base algebras.
    DescriptorMismatch,
    /// An argument list has the wrong length.
    ArityMismatch { expected: usize, got: usize },
    /// A required inverse does not exist; the payload names the object.
    Singular(&'static str),
    /// Composition requires a zero constant term.
    NonzeroConstantTerm,
    /// The degree-one component is not invertible as a linear map.
    NotCompInvertible,
    /// A Fock-space creation would exceed the truncation level.
    CapExceeded { level: usize, cap: usize },
    /// A family of blocks is not a valid partition.
    InvalidPartition(PartitionDefect),
    /// An encoding decodes to no partition.
    NoPreimage,
    /// A dense table would exceed the configured cell cap.
    SizeGuard { cells: u128, cap: u128 },
    /// An enumeration request exceeds the guard bound.
    EnumerationGuard { n: usize, max: usize },
    /// Malformed JSON input; `path` locates the offending field.
    Schema { path: String, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DescriptorMismatch => write!(f, "algebra descriptors do not match"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected}, got {got}")
            }
            Error::Singular(what) => write!(f, "{what} is not invertible"),
            Error::NonzeroConstantTerm => {
                write!(f, "composition requires a zero constant term")
            }
            Error::NotCompInvertible => {
                write!(f, "degree-one component is a singular linear map")
            }
            Error::CapExceeded { level, cap } => {
                write!(f, "tensor level {level} exceeds truncation cap {cap}")
            }
            Error::InvalidPartition(defect) => write!(f, "invalid partition: {defect}"),
            Error::NoPreimage => write!(f, "encoding has no partition preimage"),
            Error::SizeGuard { cells, cap } => {
                write!(f, "table of {cells} cells exceeds the cap of {cap}")
            }
            Error::EnumerationGuard { n, max } => {
                write!(f, "enumeration for n = {n} exceeds the guard n <= {max}")
            }
            Error::Schema { path, message } => write!(f, "at {path}: {message}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

static CELL_CAP: OnceLock<u128> = OnceLock::new();

/// Maximum number of cells a dense multilinear table may occupy.
///
/// Defaults to 4,000,000 and can be overridden with the `MULFFS_MAX_CELLS`
/// environment variable (read once per process).
pub fn cell_cap() -> u128 {
    *CELL_CAP.get_or_init(|| {
        std::env::var("MULFFS_MAX_CELLS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(4_000_000)
    })
}

pub(crate) fn check_table_size(dim: usize, degree: usize) -> Result<()> {
    let cap = cell_cap();
    let mut cells: u128 = 1;
    for _ in 0..degree {
        cells = cells.saturating_mul(dim as u128);
        if cells > cap {
            return Err(Error::SizeGuard { cells, cap });
        }
    }
    Ok(())
}
