//! Construction and verification of q-ary 1-perfect codes and distance-3
//! even-like codes over GF(q), q ∈ {2, 3, 4, 5, 7, 8, 9}.
//!
//! Small codes are enumerated; large ones are carried as a membership
//! predicate plus a uniform sampler and audited by sampling.

pub mod code;
pub mod construct;
pub mod error;
pub mod field;
pub mod linalg;
pub mod manifest;
pub mod partition;
pub mod quasigroup;
pub mod verify;

pub use code::{
    enumerate, min_distance, rank_of, BuiltCode, Cardinality, Code, CodeParams, ExplicitCode,
    LinearCode, MembershipCode,
};
pub use construct::{
    lindstrom_schonheim_build, mollard_build, theorem7_build, theorem8_build, thm8_partition,
    vasilev_build, ScalarFn, Thm7Recipe, Thm8Recipe, VectorFn,
};
pub use error::{Error, Result};
pub use field::{Field, Word};
pub use manifest::{ConstructionKind, Manifest, WordFile};
pub use partition::{
    coset_partition_d3, evenlike_d3_code, hamming_code, space_partition, CodePartition, IndexMap,
};
pub use quasigroup::{FamilyKind, FamilySpec, Quasigroup, QuasigroupChoice};
pub use verify::{
    certify_distance_sampled, verify_partition, verify_perfect_exhaustive, verify_perfect_sampled,
    VerifyReport,
};
