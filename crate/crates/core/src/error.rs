use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside the range where the model or formula is defined.
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// The operation is not available for this model, side or family.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    /// The caller violated a documented precondition (wrong regularity type, drifted subordinator, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A truncated series did not meet its remainder bound within the term cap.
    #[error("series did not converge within {terms} terms (remainder bound {bound:e})")]
    SeriesNonConvergence { terms: usize, bound: f64 },
    /// Malformed textual input (model descriptions, grids).
    #[error("parse error: {0}")]
    Parse(String),
}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! unsupported {
    ($($arg:tt)*) => { $crate::Error::Unsupported(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
pub(crate) use unsupported;
