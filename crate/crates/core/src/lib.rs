//! Random branched covers of presentation 2-complexes.
//!
//! A degree-`n` cover is determined by a tuple of permutations, one per
//! generator. This crate builds the cover's 1-skeleton and lifted disks,
//! measures overlaps and pieces, classifies disks against the critical
//! index, collapses the worrisome ones and reads off a presentation of the
//! fundamental group of the result.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! Monte Carlo harness live in the `branchcover` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod complex;
mod dsu;
pub mod cover;
pub mod group;
pub mod overlap;
pub mod perm;
pub mod presentation;
pub mod quotient;
pub mod word;

/// Exact rational number used for every ratio and threshold.
pub type Rational = num_rational::Ratio<i128>;

pub use complex::{ComplexError, Edge, PolygonalComplex};
pub use cover::{build_cover, BranchedCover, CoverError, CoverSkeleton, CoverValidityReport, LiftedDisk};
pub use group::{abelian_invariants, pi1_presentation, tietze_simplify, AbelianInvariants, OutPresentation, TietzeMove};
pub use overlap::{
    base_overlaps, check_small_cancellation, classify_disks, lifted_overlaps, pieces_direct, small_overlap_census,
    CollapseRule, Constants, DiskClassification, Orientation, OverlapCensus, OverlapError, OverlapSpec, OverlapTable,
    SizeClass, SmallCancellationReport,
};
pub use perm::{sample_stream, word_map, PermError, Permutation, SigmaTuple};
pub use presentation::{validate_acceptable, AcceptabilityReport, Presentation, PresentationError};
pub use quotient::{
    collapse_disks, collapse_worrisome, is_embedded, sample_outcome, worrisome_geometry, CollapseInvalid, CoverModel,
    ModelError, QuotientComplex, SampleOutcome, WorrisomeGeometry,
};
pub use word::{CyclicWord, Letter, Word};
