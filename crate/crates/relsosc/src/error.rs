use num_complex::Complex64;

/// Errors raised by the numerical routines.
///
/// Validation problems (bad parameters, labels outside the unit disc) are
/// distinguished from numerical non-convergence so the CLI can map them to
/// different exit codes.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at z = {z}")]
    GammaPole { z: Complex64 },

    #[error("{what} series did not converge after {terms} terms")]
    SeriesDivergence { what: &'static str, terms: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature error estimate {estimate:.3e} stagnated above tolerance {tol:.3e}")]
    QuadratureNonConvergence { estimate: f64, tol: f64 },

    #[error("spectrum is not real: Im(alpha + nu) = {imag:.3e}")]
    NonRealSpectrum { imag: f64 },

    #[error("operation needs the critical or supercritical regime ({0})")]
    WrongRegime(String),

    #[error("coherent-state tail bound {bound:.3e} still above 1e-14 at n = {n}")]
    TruncationInsufficient { bound: f64, n: usize },

    #[error("generalized degree vanishes at rho = {rho}; singular term undefined")]
    SingularTerm { rho: Complex64 },

    #[error("resolution-of-identity measure needs k > 1/2, got k = {k}")]
    MeasureUndefined { k: f64 },

    #[error("negative radicand {value:.6e} in f(E); energy outside physical range")]
    NegativeRadicand { value: f64 },

    #[error("Monte Carlo standard error {stderr:.3e} exceeds requested budget {budget:.3e}")]
    McBudgetExceeded { stderr: f64, budget: f64 },

    #[error("finite-difference step crosses the disc boundary at |zeta| = {radius}")]
    DifferentiationStep { radius: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Exit code the CLI maps this error to (1 validation, 2 numerical).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::WrongRegime(_)
            | Error::MeasureUndefined { .. }
            | Error::DifferentiationStep { .. }
            | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
