//! Crate-wide error type.
//!
//! Every fallible operation in this crate reports through [`Error`]. Numerical
//! refusals (non-integrable tails, vanishing denominators, violated operator
//! hypotheses) are ordinary error values, never panics, so callers can probe
//! configurations programmatically.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The declared decay class admits no finite bound on the tail of the
    /// integrand, so a plain semi-infinite integral cannot be truncated.
    #[error("decay class admits no finite tail bound for a non-oscillatory integral")]
    NonIntegrableDecay,

    /// An integrand produced NaN or an infinity; the offending abscissa is
    /// reported so the caller can locate the bad sample.
    #[error("integrand returned a non-finite value at x = {x:.6e}")]
    NonFiniteSample { x: f64 },

    /// The sign-alternating series built from half-period panels stopped
    /// contracting, so no limit can be assigned to the oscillatory integral.
    #[error("alternating-series acceleration failed to contract after {terms} half-period terms")]
    AccelerationDiverged { terms: usize },

    /// A decay-class parameter outside its admissible range (exponential rate
    /// must be positive, polynomial order must exceed one).
    #[error("invalid decay parameter {value}: {reason}")]
    InvalidDecay { value: f64, reason: &'static str },

    /// A quadrature configuration field violates its documented range.
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),

    /// Argument outside the mathematical domain of a special function.
    #[error("argument {x} outside the domain of {what}")]
    Domain { what: &'static str, x: f64 },

    /// The kernel requires v + w > 0; anything else is degenerate.
    #[error("degenerate kernel arguments: v + w = {vw} must be positive")]
    DegenerateKernel { vw: f64 },

    /// None of the function-space membership combinations that make the
    /// requested operation well defined holds for the supplied functions.
    #[error("operator hypotheses violated: {0}")]
    HypothesisViolation(String),

    /// The function cannot be fed to the requested transform (wrong space, or
    /// no integrable decay at an endpoint that needs one).
    #[error("function `{label}` is not transformable: {reason}")]
    NotTransformable { label: String, reason: &'static str },

    /// A sampled spectrum was asked for values beyond its grid without a
    /// declared tail decay.
    #[error("spectrum tail behaviour undeclared; cannot extend beyond the sampled grid")]
    TailUnknown,

    /// The spectral multiplier of a Watson-type operator exceeded the
    /// boundedness cap on the audit grid.
    #[error("spectral multiplier unbounded: |m({y:.4})| = {value:.4e} exceeds the audit cap")]
    UnboundedMultiplier { y: f64, value: f64 },

    /// The unitarity condition fails on the audit grid, so the inverse
    /// operator formula is not available for this pair.
    #[error("unitarity condition violated: deviation {deviation:.4e} at y = {y:.4}")]
    ConditionViolated { y: f64, deviation: f64 },

    /// Even polynomial multiplier with a real zero or negative values.
    #[error("inadmissible even polynomial: {0}")]
    InvalidPolynomial(String),

    /// Exponent tuple outside the feasibility region of an inequality.
    #[error("exponent configuration infeasible: {0}")]
    ExponentMismatch(String),

    /// A weighted integrand grows faster than the available decay.
    #[error("non-integrable weighted integrand: {0}")]
    NonIntegrable(String),

    /// The weight polyconvolution vanished (or went negative) somewhere on
    /// the evaluation grid, so the weighted inequality is undefined there.
    #[error("weight polyconvolution not strictly positive at x = {x:.6}: value {value:.6e}")]
    VanishingWeightConvolution { x: f64, value: f64 },

    /// A solver denominator dropped below the refusal threshold on the audit
    /// grid; the solution formula would divide by (nearly) zero.
    #[error("symbol denominator nearly vanishes: |d({y:.6})| = {modulus:.4e} below threshold")]
    SingularSymbol { y: f64, modulus: f64 },

    /// The quotient spectrum decays too slowly to lie in L2 (empirical
    /// dyadic-tail estimate).
    #[error("quotient spectrum decay order {order:.3} too slow for an L2 solution")]
    NonL2Quotient { order: f64 },

    /// Unparseable function label handed to the catalogue.
    #[error("unknown function label `{0}`")]
    UnknownLabel(String),

    /// Grid construction with non-positive, non-finite or unsorted points.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A grid-valued operation failed at one point; wraps the cause.
    #[error("evaluation failed at point {at:.6e}: {cause}")]
    AtPoint { at: f64, cause: Box<Error> },
}

impl Error {
    /// Wrap an error with the grid point at which it occurred.
    pub fn at_point(self, at: f64) -> Error {
        Error::AtPoint {
            at,
            cause: Box::new(self),
        }
    }
}
