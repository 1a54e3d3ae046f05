use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside its mathematical domain (alpha, dimension, radii, ...).
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// Evaluation requested at a singular input (x = 0 for a Levy density,
    /// coincident points for a Green function, boundary inputs for a Poisson kernel).
    #[error("singular input: {0}")]
    SingularInput(String),

    /// A quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Geometry inconsistent with a declared certificate (kappa too large, R too large, ...).
    #[error("fatness certificate violation: {0}")]
    Certificate(String),

    /// A precondition on points/sets was violated (target overlaps domain,
    /// start point outside domain, inadmissible tuple, ...).
    #[error("inadmissible input: {0}")]
    Inadmissible(String),

    /// A path exceeded the configured step cap before exiting.
    #[error("step cap of {cap} exceeded before exit (path {path_index})")]
    StepCapExceeded { cap: u64, path_index: u64 },

    /// Scheme parameters invalid for the process.
    #[error("invalid scheme parameters: {0}")]
    InvalidScheme(String),

    /// KDE bandwidth too large relative to the evaluation point's boundary distance.
    #[error("bandwidth {bandwidth} exceeds half the boundary distance {rho} at the evaluation point")]
    BandwidthTooLarge { bandwidth: f64, rho: f64 },

    /// Aggregate of path-level failures from a batch run.
    #[error("{failed} of {total} paths failed; first failure at index {first_index}: {first_error}")]
    BatchFailures {
        failed: usize,
        total: usize,
        first_index: u64,
        first_error: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
