use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The root scan could not isolate the requested level.
    #[error("bracket failure at level {level}: {detail}")]
    BracketFailure { level: usize, detail: String },

    /// The spectrum is too short for the requested temperature.
    #[error(
        "truncation error at T = {temperature} K: {levels} levels leave a tail of {tail:.3e}; \
         need about n_max = {required_n_max}"
    )]
    Truncation {
        temperature: f64,
        levels: usize,
        tail: f64,
        required_n_max: usize,
    },

    /// A Carnot cycle whose lengths do not satisfy L_h²/L_c² = T_c/T_h.
    #[error(
        "reversibility violated: L_h²/L_c² = {actual:.6} but T_c/T_h = {required:.6} \
         (relative residual {residual:.3e}); use L_c = {required_l_cold:.6e} m"
    )]
    Reversibility {
        actual: f64,
        required: f64,
        residual: f64,
        required_l_cold: f64,
    },

    /// Invalid combination of inputs, caught before any evaluation.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("sweep has {failed} error cells out of {total}: {causes}")]
    TooManyErrorCells {
        failed: usize,
        total: usize,
        causes: String,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that stem from bad inputs rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Validation(_) | Error::Reversibility { .. }
        )
    }
}
