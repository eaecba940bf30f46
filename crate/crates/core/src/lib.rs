//! Exact-arithmetic engine for absolute intersection cohomology of smooth
//! varieties presented by a smooth compactification with normal-crossing
//! boundary.

pub mod absic;
pub mod atlas;
pub mod error;
pub mod factor;
pub mod hodge;
pub mod plus;
pub mod qmat;
pub mod report;
pub mod wss;

pub use absic::{absolute_ic, boundary_cohomology, direct_factor_check, AbsicResult};
pub use atlas::{builtin, load_atlas, validate_atlas, StratumAtlas, ValidationReport};
pub use error::{Error, Result};
pub use factor::{ch_factorization, ch_object, idempotent_kernel, versal_embed, ChDecomposition, VersalEmbedding};
pub use hodge::{weight_support, CohomologyTable, MixedGraded, PureMorphism, PureObject, Slot, TableKind};
pub use plus::{
    compare_candidates, ih_one_point, intersection_matrix_rank, plus_dichotomy, weight_criteria, ComparisonReport,
    CriteriaReport, DichotomyResult, Horn,
};
pub use qmat::{adjoint_pushforward, Matrix, Scalar};
pub use report::{build_report, Report, What};
pub use wss::{grw, grw_c, gysin_complex, restriction_complex, u_map, WeightComplex};

/// Engine version recorded in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
