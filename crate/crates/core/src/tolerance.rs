//! Numerical tolerances and size limits shared by every module.

/// Structural validation: Hermiticity, trace, positivity, norms, anticommutators.
pub const STRUCTURAL: f64 = 1e-10;

/// Agreement between two independent routes to the same number.
pub const EQUIVALENCE: f64 = 1e-9;

/// Width of Monte-Carlo acceptance bands, in standard deviations.
pub const MC_SIGMAS: f64 = 4.0;

/// Eigenvalues at or below this are treated as zero when building purifications.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Largest total Hilbert-space dimension a dense matrix may have.
pub const MAX_TOTAL_DIM: usize = 4096;

/// Largest number of gamma generators [`crate::clifford::generate`] accepts.
pub const MAX_CLIFFORD_GENERATORS: usize = 12;

/// Largest register exponent for query matrices.
pub const MAX_QUERY_EXPONENT: usize = 10;

/// A query is flagged as pathological when one answer has prior probability above `1 - PATHOLOGY`.
pub const PATHOLOGY: f64 = 1e-6;

/// Probability vectors must sum to one within this.
pub const PROBABILITY_SUM: f64 = 1e-12;
