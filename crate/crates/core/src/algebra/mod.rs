//! Exact rational arithmetic and truncated multivariate Laurent series.

mod functions;
pub mod rational;
mod series;
mod window;

pub use functions::{coefficients, product_expansion, product_of_binomials};
pub use rational::{Rational, RationalRepr};
pub use series::Series;
pub use window::{Monomial, VarWindow, Window};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("not invertible")]
    NotInvertible,
    #[error("non-nilpotent argument: term {0} has grading degree < 1")]
    NonNilpotent(String),
    #[error("series has no truncated grading variable")]
    NoGrading,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("negative power of non-Laurent variable {0}")]
    NegativePower(String),
    #[error("term {monomial} lies below the support bound of {var}")]
    BelowSupport { monomial: String, var: String },
    #[error("substitution escapes the output window: {monomial} (variable {var})")]
    SubstitutionEscapes { monomial: String, var: String },
    #[error("requested precision in {var} exceeds what is known")]
    PrecisionExceeded { var: String },
    #[error("product over {var} stops at n = {n_max}, below the window maximum")]
    ProductTooShort { var: String, n_max: i64 },
}
