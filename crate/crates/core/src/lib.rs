//! Burnside rings of saturated fusion systems.
//!
//! The pipeline: build a finite group from permutation generators
//! ([`group::GroupTable`]), enumerate its subgroup lattice ([`lattice`]),
//! compute tables of marks and Mobius matrices ([`burnside`]), impose fusion
//! from an ambient group or an explicit partition ([`fusion`]), and obtain the
//! irreducible basis `alpha_P` of the fusion Burnside ring two independent
//! ways: exact matrix inversion ([`fusion::FusionSystem::alpha`]) and
//! alternating sums over broken chains ([`chains`]). The [`bisets`] module
//! applies the same machinery inside the poset of twisted diagonal subgroups
//! of S x S to produce the minimal characteristic biset.
//!
//! All arithmetic is exact: integers where possible, `Ratio<i64>` elsewhere.
//!
//! # Example
//!
//! The fusion system of the Klein four-group inside the alternating group
//! `A4`, its irreducible stable basis, and its minimal characteristic biset:
//!
//! ```
//! use burnside::fusion::FusionSystem;
//! use burnside::group::GroupTable;
//! use burnside::perm::Perm;
//! use std::sync::Arc;
//!
//! let v4 = GroupTable::from_generators(
//!     "V4",
//!     4,
//!     vec![Perm::parse("(1 2)(3 4)", 4)?, Perm::parse("(1 3)(2 4)", 4)?],
//! )?;
//! let a4 = GroupTable::from_generators(
//!     "A4",
//!     4,
//!     vec![Perm::parse("(1 2 3)", 4)?, Perm::parse("(2 3 4)", 4)?],
//! )?;
//! let fs = Arc::new(FusionSystem::from_ambient(&v4, &a4, 2, false)?);
//!
//! // Three fusion classes: 1, the fused class of involutions, V4 itself.
//! let alphas = fs.alpha_all()?;
//! assert_eq!(alphas.len(), 3);
//! // alpha at the fused involution class: stability forces one copy of
//! // [S/C2] for each of the three fused subgroups, nothing else.
//! assert_eq!(alphas[1].coeffs, vec![0, 1, 1, 1, 0]);
//!
//! // The minimal characteristic biset is |S|-free, stable, of coprime size.
//! let biset = burnside::bisets::minimal_biset(&fs)?;
//! assert!(burnside::bisets::verify_characteristic(&biset).is_characteristic());
//! # Ok::<(), burnside::Error>(())
//! ```

pub mod bitset;
pub mod burnside;
pub mod bisets;
pub mod chains;
pub mod fusion;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod perm;

use thiserror::Error;

/// Exact rational scalar used wherever integer arithmetic does not suffice.
pub type Rat = num::rational::Ratio<i64>;

/// Build a rational from numerator and denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("permutation domain is empty")]
    EmptyDomain,
    #[error("point {point} out of range for domain of size {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cycle reuses point {0}")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation: {0}")]
    BadCycle(String),
    #[error("permutations act on different domains ({0} vs {1} points)")]
    DegreeMismatch(usize, usize),
    #[error("group closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("subgroup enumeration exceeded the cap of {cap} subgroups")]
    TooManySubgroups { cap: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element {0} of the subgroup is missing from the ambient group")]
    NotASubgroup(String),
    #[error("embedding does not preserve products")]
    NotAHomomorphism,
    #[error("group of order {order} is not a {p}-group")]
    NotAPGroup { order: u64, p: u64 },
    #[error("subgroup of index {index} is not Sylow at p = {p}")]
    NotSylow { index: u64, p: u64 },
    #[error("invalid fusion partition: {0}")]
    BadPartition(String),
    #[error("fusion system has no ambient backend")]
    NoAmbientBackend,
    #[error(
        "alpha for class {p_label} is not a valid basis element: coefficient {value} at class {q_label}"
    )]
    AlphaDiagnostic {
        p_label: String,
        q_label: String,
        value: Rat,
    },
    #[error("mark vector has a non-integral value {value} at class {q_label}")]
    NonIntegralMarks { q_label: String, value: Rat },
    #[error("broken-chain cancellation failed: {0}")]
    Cancellation(String),
    #[error("characteristic biset has invalid coefficient {value} at {label}")]
    BisetCoefficient { label: String, value: Rat },
    #[error("no subgroup found: {0}")]
    NoSuchSubgroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
