//! Exact and empirical statistics for the number of partial sums of a
//! multidimensional random walk that are absorbed in convex position.
//!
//! The crate has four layers:
//!
//! * [`exact`] — integer/rational combinatorics: the coefficient rows behind
//!   the closed-form expectations, the expectations themselves, and the two
//!   classical occupation-time distributions they reduce to in dimension one.
//! * [`geometry`] — an exact rational feasibility kernel (phase-1 simplex with
//!   Bland's rule), a floating-point fast path with an exact fallback,
//!   fraction-free rank computation, and general-position certification
//!   against the two reflection arrangements.
//! * [`simulate`] — reproducible Monte Carlo: seeded samplers, walk/bridge
//!   path generation, absorption counting, and worker-count-independent
//!   estimators.
//! * [`weyl`] — exhaustive enumeration of chamber faces of the two reflection
//!   arrangements, weighted face-count averages, and the per-path equivalence
//!   between absorbed index tuples and nontrivially-met faces.
//!
//! All exact results are `num_rational::BigRational` values; floating point
//! only ever appears in Monte Carlo estimates and in the geometric fast path,
//! whose ambiguous cases are re-decided exactly.

pub mod exact;
pub mod geometry;
pub mod simulate;
pub mod weyl;

pub use exact::{
    arcsine_pmf, b_row, expected_containing_count, expected_m_bridge, expected_m_walk,
    limit_moment_bridge, limit_moment_walk, nonabsorption_bridge, nonabsorption_walk,
    stirling_row, uniform_bridge_pmf, BRow, StirlingRow,
};
pub use geometry::{
    cone_meets_subspace_trivially, general_position_check, matrix_rank, origin_in_hull,
    origin_in_hull_fast, Arrangement, ConeKind, RatMatrix, SubspaceSpec,
};
pub use simulate::{
    count_nonabsorbed_tuples, monte_carlo_expected_m, sample_bridge, sample_walk, BridgePath,
    CountMode, IncrementSampler, MonteCarloEstimate, WalkPath,
};
pub use weyl::{
    average_trivial_faces_a, average_trivial_faces_b, bridge_face_equivalence,
    chamber_vertex_count, corollary_vertex_distribution, enumerate_partitions,
    enumerate_signed_partitions, face_multiplicity, walk_face_equivalence, ChamberB,
    FaceCountReport, Partition, SignedPartition, VertexDistribution,
};
