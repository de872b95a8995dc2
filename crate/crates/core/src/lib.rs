#![no_std]
#![warn(missing_docs)]

//! Recovery of the observable Laplacian eigenvalues of an unknown network
//! from a single finite sequence of scalar output measurements.
//!
//! The crate is split along the pipeline:
//!
//! * [`graph`] builds simple undirected graphs and their system matrices,
//!   either the combinatorial Laplacian `L = D - G` or the random-walk matrix
//!   `D^-1 G` (called the normalized Laplacian throughout this crate; note it
//!   is *not* the symmetric `I - D^-1/2 G D^-1/2`).
//! * [`eigen`] produces the reference eigendecomposition used as ground truth.
//! * [`dynamics`] simulates the scalar output of discrete-time and
//!   continuous-time networks of single integrators or identical agents.
//! * [`recovery`] is the estimator: Hankel rank, Prony coefficients,
//!   companion-matrix roots, moment unmixing and the logarithmic map for
//!   sampled continuous-time systems.
//! * [`oracle`] computes spectral weights, the recoverable support set and
//!   estimate-vs-truth match reports.
//!
//! Everything here is `no_std` + `alloc`; file formats and the CLI live in
//! the `lapspec-cli` companion crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod eigen;
mod error;
pub mod expm;
pub mod graph;
pub mod oracle;
pub mod recovery;

pub use error::{Error, Result};

/// The linear-algebra crate used in the public API.
pub use nalgebra;

pub use dynamics::{
    random_observation, simulate_ct_integrator, simulate_ct_network, simulate_dt_integrator,
    simulate_dt_network, AgentModel, MeasurementSeries, ObservationMode, ObservationSpec,
    SeriesMeta, TimeDomain,
};
pub use eigen::{eig_reference, SpectrumDecomposition};
pub use graph::{
    build_graph, generate_preferential_attachment, generate_ring, laplacian, Graph, LaplacianKind,
    SystemMatrix,
};
pub use oracle::{
    match_spectra, match_values, pbh_observable, pbh_rank_observable, spectral_weights,
    spectral_weights_grouped, support_set, Atom, MatchReport, MatchedPair, SpectralMeasure,
    SupportSet,
};
pub use recovery::{
    binomial_lower_triangular, build_hankel, ct_log_transform, nu_sequence_ct, nu_sequence_dt,
    numerical_rank, polynomial_roots, prony_coefficients, recover_ct_spectrum, recover_dt_spectrum,
    recover_network_spectrum, unmix_moments, HankelMatrix, MomentSequence, RankInfo,
    RecoveryOptions, SpectralEstimate,
};
