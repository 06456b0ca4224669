//! Exact and Monte Carlo moments of the partial transpose of random
//! bipartite quantum states.
//!
//! The expected moments of `mn·ρ^Γ`, where `ρ` is obtained by tracing an
//! environment `C^l` out of a uniformly random pure state on
//! `C^l ⊗ C^m ⊗ C^n`, are finite sums over the symmetric group. This crate
//! evaluates them exactly in rational arithmetic, computes the limiting
//! laws that appear in the various dimension regimes (shifted semicircle,
//! meander polynomials, free difference of free Poisson laws), and checks
//! everything against an independent Wishart Monte Carlo harness.
//!
//! Modules:
//!
//! - [`permgroup`]: permutations, Cayley distance, geodesics, genus functions
//! - [`ncpartitions`]: noncrossing partitions and the map to geodesic permutations
//! - [`freeprob`]: moment–cumulant transform and limit laws
//! - [`exactmoments`]: finite-dimensional moments via class-count tables
//! - [`meanders`]: meander enumeration and meander polynomials
//! - [`harerzagier`]: genus counts of pairings and related inequalities
//! - [`montecarlo`]: random states, partial transpose, spectra, estimators

pub mod error;
pub mod exactmoments;
pub mod freeprob;
pub mod harerzagier;
pub mod meanders;
pub mod montecarlo;
pub mod ncpartitions;
pub mod permgroup;
pub mod scalar;
pub mod selfcheck;

pub use error::{Error, Result};
pub use exactmoments::{ClassCountTable, MixedMomentSpec, TableCache};
pub use freeprob::{CumulantSequence, DistributionSpec, MomentSequence};
pub use meanders::{MeanderConfig, MeanderTally};
pub use montecarlo::{ComplexMatrix, McEstimate, RngStream};
pub use ncpartitions::{NoncrossingPartition, SetPartition};
pub use permgroup::{EnumerationRange, GenusKind, Permutation};
pub use scalar::ExactScalar;
