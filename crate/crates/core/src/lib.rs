//! Exact computation of h-functions and s-multiplicities.
//!
//! The crate computes colengths of expanded ideal pairs `I^ceil(sq) + J^[q]`
//! in monomial and hypersurface-type presentations, normalizes them into
//! h-function samples, extrapolates s-multiplicities and their Hilbert-Kunz
//! and Hilbert-Samuel endpoints, and runs a harness of published-bound
//! checks over fiber products, idealizations, and amalgamated duplications.
//!
//! All arithmetic is exact: monomial staircases are counted combinatorially,
//! polynomial relations are handled by linear algebra over F_p, and every
//! normalized value is an arbitrary-precision rational.

pub mod constructions;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod monomial;
pub mod ratio;
pub mod ring;

pub use constructions::{
    duplication_presentation, fiber_product_presentation, ideal_power_length_oracle, ideal_span,
    idealization_presentation, truncation_oracle, ArtinAlgebra, Duplication, FiberProduct,
    Idealization, PowerMode,
};
pub use error::{Error, Result};
pub use limits::{
    e_estimate, endpoint_multiplicities, h_estimate, normalizer, zigzag_bound, zigzag_constants,
    HEstimate, HQuery, Sample,
};
pub use monomial::{Monomial, MonomialIdeal};
pub use ratio::Rat;
pub use ring::{
    expand_pair, expand_pair_materialized, ExpandedIdeal, IdealSpec, ModuleSpec, PolyRelation,
    RingPresentation,
};
