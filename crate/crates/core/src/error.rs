use alloc::string::String;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Graph has no nodes.
    #[error("graph must have at least one node")]
    EmptyGraph,
    /// The same unordered pair appeared twice.
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    /// An edge `{i, i}`.
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    /// An edge endpoint outside `0..n`.
    #[error("edge {{{i}, {j}}} out of range for {n} nodes")]
    IndexOutOfRange {
        /// First endpoint.
        i: usize,
        /// Second endpoint.
        j: usize,
        /// Node count.
        n: usize,
    },
    /// Generator size below its minimum.
    #[error("need at least {min} nodes, got {n}")]
    TooSmall {
        /// Requested size.
        n: usize,
        /// Minimum size.
        min: usize,
    },
    /// Generator parameters are inconsistent.
    #[error("bad generator parameters: {0}")]
    BadParameters(String),
    /// A degree-zero node makes `D^-1` undefined.
    #[error("node {0} is isolated; the normalized Laplacian is undefined")]
    IsolatedNode(usize),
    /// Reference eigendecomposition failed its residual checks.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// Vector or matrix sizes disagree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Expected length.
        expected: usize,
        /// Actual length.
        found: usize,
    },
    /// A model or series parameter is invalid (non-finite, nonpositive period, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Operation requires a different Laplacian kind.
    #[error("operation requires the {0} Laplacian")]
    WrongKind(&'static str),
    /// Operation requires a different time domain.
    #[error("operation requires a {0} series")]
    WrongDomain(&'static str),
    /// Not enough samples for the requested Hankel size.
    #[error("insufficient data: need {needed} samples, have {available}")]
    InsufficientData {
        /// Samples required.
        needed: usize,
        /// Samples available.
        available: usize,
    },
    /// The `r x r` Prony system has effective rank below `r`.
    #[error("Prony system of size {size} has effective rank {effective}")]
    RankDeficientSystem {
        /// Requested size `r`.
        size: usize,
        /// Effective rank found.
        effective: usize,
    },
    /// A companion root has an imaginary part above tolerance.
    #[error("complex root {re} + {im}i exceeds the realness tolerance")]
    ComplexRoots {
        /// Real part of the worst root.
        re: f64,
        /// Imaginary part of the worst root.
        im: f64,
    },
    /// The root iteration did not converge.
    #[error("polynomial root iteration did not converge")]
    RootsDidNotConverge,
    /// Series carries no recoverable mode (rank 0).
    #[error("empty support: the series has Hankel rank 0")]
    EmptySupport,
    /// `gamma^T beta` is numerically zero.
    #[error("moment unmixing is singular: nu_0 = {0}")]
    UnmixingSingular(f64),
    /// A continuous-time agent factor vanished.
    #[error("agent factor nu_{k} = {value} vanishes")]
    NuVanishes {
        /// Sample index.
        k: usize,
        /// Offending value.
        value: f64,
    },
    /// A recovered continuous-time root is not positive.
    #[error("recovered root {0} is not positive; cannot take its logarithm")]
    NonpositiveRoot(f64),
}

impl Error {
    /// True for errors that signal numerical trouble in the estimator
    /// rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalFailure(_)
                | Error::RankDeficientSystem { .. }
                | Error::ComplexRoots { .. }
                | Error::RootsDidNotConverge
                | Error::NonpositiveRoot(_)
                | Error::NuVanishes { .. }
        )
    }
}
