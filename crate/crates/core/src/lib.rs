//! Exact combinatorics of r-unavoidable simplicial complexes.
//!
//! A complex `K ⊆ 2^[m]` is *r-unavoidable* when every partition of `[m]`
//! into `r` nonempty blocks has a block in `K`. This crate computes the
//! partition number `π(K)` and related predicates, decides linear and
//! weighted-hypergraph realizability with exact rational arithmetic,
//! generates the standard example families, and evaluates the
//! non-embeddability inequalities that unavoidable joins satisfy.

pub mod certify;
pub mod complex;
pub mod error;
pub mod generators;
pub mod partition;
pub mod rational;
pub mod realize;
pub mod subset;

pub use certify::{
    certify_join_nonembeddable, certify_single_nonembeddable, index_bound_deleted_join,
    index_bound_deleted_product, prime_power, Abstention, Certificate, PrimePower, Verdict,
};
pub use complex::{sublevel_complex, AlexanderDual, Measure, SimplicialComplex};
pub use error::{Error, Result};
pub use generators::{
    deleted_join_faces, is_admissible, points, ramsey_complex, random_selfdual, skeleton,
    GraphProperty,
};
pub use partition::{
    hypergraph_partition_number, is_minimally_r_unavoidable, is_r_unavoidable, is_rs_unavoidable,
    max_disjoint_min_nonfaces, partition_number, partition_number_oracle, PackingWitness,
    PartitionWitness, Unavoidability,
};
pub use realize::{
    is_linearly_realizable, linear_subcomplex_witness, pi_upper_bound, prune_zero_weights,
    selfdual_wh_realization, superadditive_sublevel, wh_realization_check, GeometricMeasure,
    LpVerdict, WeightedHypergraph,
};
pub use subset::{Subset, MAX_VERTICES};
