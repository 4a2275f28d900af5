use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("complete symmetric polynomial needs 2 or 3 linear forms, got {0}")]
    FormCount(usize),

    #[error("parameter r must be positive, got {0}")]
    NonPositiveParameter(String),

    #[error("degenerate normal while computing incidence {0}")]
    DegenerateNormal(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is not invariant under {group}: residual {residual} at monomial {monomial}")]
    NotInvariant {
        group: String,
        monomial: String,
        residual: String,
    },

    #[error("no closed form for family {family}, k = {k}, m = {m}")]
    NoClosedForm { family: String, k: u8, m: u32 },

    #[error("skeleton dimension must be 0..=3, got {0}")]
    BadSkeletonDimension(u8),

    #[error(
        "coefficient {coefficient} = {value} lies in the indeterminate band ({zero_tol:e}, {nonzero_tol:e})"
    )]
    Indeterminate {
        coefficient: String,
        value: String,
        zero_tol: f64,
        nonzero_tol: f64,
    },

    #[error("case analysis does not apply: {0}")]
    Undecided(String),

    #[error("exact sequence check failed at degree {degree}: {what} (defect {defect})")]
    ExactSequence {
        degree: u32,
        what: String,
        defect: usize,
    },

    #[error("unsupported family {0:?} (expected tetra or octa)")]
    UnsupportedFamily(String),

    #[error("check failed: {0}")]
    CheckFailed(String),
}
