//! Desk-scale toolkit for finitely presented groups: subnormal p-power
//! subgroup chains, Schreier-graph Cheeger diagnostics, mod-p homology of
//! covering 2-complexes, largeness certificates built from disjoint
//! non-separating regular mod-p cocycles, subgroup-growth ledgers and the
//! linear codes cut out by cover cohomology.
//!
//! Everything is exact (F_p linear algebra, rational Cheeger values) except
//! the advisory spectral brackets in [`expansion::cheeger_bounds`], which are
//! floating point and marked as such in reports.

pub mod cli;
pub mod cocycles;
pub mod codes;
pub mod complexes;
pub mod cosets;
pub mod error;
pub mod expansion;
pub mod fplinalg;
pub mod growth;
pub mod lamplighter;
pub mod largeness;
pub mod report;
pub mod util;
pub mod words;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
