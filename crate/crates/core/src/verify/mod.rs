//! Checks of the extremal statements against brute force and exact
//! arithmetic.
//!
//! * [`oracle`] enumerates all maximal t-intersecting families at desk scale.
//! * [`theorems`] compares oracle results and built families with the
//!   closed-form bounds.
//! * [`proofs`] evaluates the numeric inequalities inside the proofs.
//! * [`random`] draws seeded random maximal families for property suites.
//! * [`suite`] bundles the checks into named report suites.

pub mod oracle;
pub mod proofs;
pub mod random;
pub mod suite;
pub mod theorems;

pub use oracle::{oracle_maximal_families, Fingerprint, OracleResult};
pub use proofs::{
    certified_cases, check_proof_constants, default_grid, parse_grid, GridPoint, ProofTarget,
};
pub use random::{greedy_maximal, is_maximal, random_maximal_families};
pub use suite::{run_suite, Suite, SuiteOptions};
pub use theorems::{
    check_g2_diversity, check_max_diversity, check_no_regular, check_no_regular_oracle,
    check_relative_diversity, check_structural_tightness, check_tint_extremal, g2_diversity,
    g2_diversity_via, tint_extremal_reports, G2Diversity, G2Route,
};
