use thiserror::Error;

/// Errors produced by constructors and checkers.
///
/// Law violations are not errors: checkers report them in a [`crate::law::LawReport`].
/// Errors cover malformed inputs, size guards and structural preconditions.
#[derive(Debug, Error)]
pub enum KamError {
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },

    #[error("carrier of {what} has {size} elements, exceeding the bound {bound}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("enumerating {what} would visit {count} candidates, exceeding the bound {bound}")]
    EnumerationGuard {
        what: &'static str,
        count: u128,
        bound: u64,
    },

    #[error("elements belong to different algebras")]
    CrossAlgebra,

    #[error("modules are not composable: {detail}")]
    Incompatible { detail: String },

    #[error("subset is not a subalgebra: {detail}")]
    NotSubalgebra { detail: String },

    #[error("element {index} is not idempotent")]
    NotIdempotent { index: usize },

    #[error("idempotent {index} is not full")]
    NotFull { index: usize },

    #[error("corner star fails law {law}: {detail}")]
    CornerStar { law: String, detail: String },

    #[error("hom set is not closed under the pointwise action: {detail}")]
    HomNotClosed { detail: String },

    #[error("construction produced an invalid structure: {detail}")]
    ConstructionFailed { detail: String },
}

pub type Result<T> = std::result::Result<T, KamError>;
