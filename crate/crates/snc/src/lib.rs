//! Secure linear network coding over prime fields.
//!
//! The crate builds, transforms, and verifies secure linear network codes
//! (SLNCs) on directed acyclic networks, centered on families that share
//! every intermediate-node kernel while the rate steps down one at a time
//! for a fixed security level:
//!
//! - [`field`] / [`linalg`]: exact arithmetic and linear algebra over `F_p`;
//! - [`network`]: DAGs, edge-subset min cuts, and the reduced wiretap
//!   collection of primary edge subsets;
//! - [`lnc`]: linear network codes, global kernels, transmission, and
//!   source-kernel transformations;
//! - [`slnc`]: the security condition, pre-coding matrix construction, the
//!   rate-reduction step, and family assembly;
//! - [`oracle`]: exhaustive secrecy/decodability verifiers and the
//!   brute-force valid-`k` set, used as ground truth in tests.

pub mod field;
pub mod linalg;
pub mod lnc;
pub mod network;
pub mod oracle;
pub mod slnc;

pub use field::{FieldError, FieldSpec, Scalar};
pub use linalg::{vector_outside_union, LinalgError, Matrix, Subspace};
pub use lnc::{GlobalKernels, LinearNetworkCode, LncError};
pub use network::{Edge, EdgeSet, Network, NetworkError, WiretapCollection};
pub use oracle::{
    exhaustive_decodability, exhaustive_secrecy, valid_k_oracle, AllWiretapSets, OracleError,
    SecrecyReport, DEFAULT_BUDGET,
};
pub use slnc::{
    build_family, check_security, check_security_witness, construct_q, kappa_set,
    partition_wiretap_sets, reduce_rate, reduction_matrix, BoundMode, CodeFamily, FamilyOptions,
    ReduceOptions, ReductionContext, SecureCode, SlncError,
};
