//! Exact spectral sequences of weight-filtered de Rham models on Carnot
//! groups, with duality and morphism checks and numeric pullback tests.

pub mod carnot;
pub mod exactla;
pub mod filtered;
pub mod forms;
pub mod morphism;
pub mod numeric;
pub mod poly;
pub mod random;
pub mod spectral;
pub mod suites;

pub use carnot::{GradedHomomorphism, GradedLieAlgebra, Violation};
pub use exactla::{Matrix, QuotientSpace, Rational, Subspace, Vector};
pub use filtered::{dualize, DualityData, FilteredComplex, Orientation};
pub use forms::{ExteriorElement, FilteredComplexBuild, MultiIndex};
pub use morphism::{FilteredMap, PageMorphism};
pub use numeric::{SmoothMap, Tolerances};
pub use random::named_rng;
pub use spectral::{compute_pages, compute_pages_homological, limit_page, SpectralError, SpectralSequence};
