use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("physicality: covariance matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NonPositiveMatrix { min_eigenvalue: f64 },

    #[error("physicality: symplectic eigenvalues are complex (discriminant {discriminant:.3e})")]
    ComplexEigenvalue { discriminant: f64 },

    #[error("physicality: smallest symplectic eigenvalue {nu_minus:.9} violates the vacuum bound 1")]
    Unphysical { nu_minus: f64 },

    #[error("matrix is not in standard form: entry ({row}, {col}) = {value:.3e} exceeds tolerance {tol:.3e}")]
    NotStandardForm {
        row: usize,
        col: usize,
        value: f64,
        tol: f64,
    },

    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| = {asymmetry:.3e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        asymmetry: f64,
    },

    #[error("unphysical squeezer: V_sq * V_anti = {product:.6} < 1")]
    UnphysicalSqueezer { product: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matrix in {0}")]
    SingularMatrix(&'static str),

    #[error("Cholesky factorization failed: covariance is numerically non-positive")]
    FactorizationFailure,

    #[error("InsufficientData: {0}")]
    InsufficientData(String),

    #[error("DegenerateBootstrap: {projected} of {resamples} resamples violated physicality beyond statistical tolerance")]
    DegenerateBootstrap { projected: usize, resamples: usize },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}
