//! Restricted isometry estimation, chaos matrices and identity verification.

mod chaos;
mod identities;
mod rip;

pub use chaos::{
    a_q_vectors, bilinear_chaos_matrix, chaos_matrix, chaos_rip_link, metric_d1_d2, star_norm,
    ChaosMatrix,
};
pub(crate) use rip::partial_shuffle;
pub use identities::{verify_identities, IdentityCheck, IdentityReport, IDENTITY_TOLERANCE};
pub use rip::{
    binomial, coherence_rip_bound, exact_rip_constant, exact_rip_constant_with_budget, gram_matrix,
    hermitian_eigenvalues, monte_carlo_rip, sample_support, submatrix_extremal_eigs, welch_bound,
    RipEstimate, RipMode, DEFAULT_ENUMERATION_BUDGET,
};
