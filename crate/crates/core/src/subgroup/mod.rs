//! Subgroup membership oracles, the irreducibility criterion and
//! normalizer classification.

pub mod conjugacy;
pub mod normalizer;
mod oracle;

pub use conjugacy::{
    conjugacy_rule, finite_index_descent_check, h_conjugates, irreducibility_check, ConjugacyReport, ConjugacyRule,
    ConjugacyVerdict, DescentReport, Irreducibility,
};
pub use normalizer::{
    classify_element, normalizer_ball_report, product_normalizer_check, NormalizerBallReport, NormalizerClassification,
    NormalizerVerdict, ProductCheck,
};
pub use oracle::{SubgroupKind, SubgroupOracle};
