//! The expansion algorithm and the convergent recurrences.

mod convergents;
mod expand;
mod sequence;

pub use convergents::{
    approx_defect, audit_identities, convergents, decompose, evaluate, ConvergentPair,
    ConvergentTable, IdentityAudit, PadicDecomposition,
};
pub use expand::{expand, expand_with_retry, CFExpansion, Termination};
pub use sequence::{parse_sequence, validate_quotients};
