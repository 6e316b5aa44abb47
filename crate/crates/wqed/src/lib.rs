//! Two-photon transport through a two-level system coupled to a chiral
//! one-dimensional photonic continuum.
//!
//! The crate implements the full analytic scattering theory of the one-mode
//! model — single-photon amplitudes, the two-photon scattering operator
//! diagonalized over plane-wave-like `W` states plus a photon bound state,
//! background fluorescence, and the real-space bunching/anti-bunching
//! observables — together with the numerical machinery that verifies it:
//! piecewise eigenstate construction with boundary-condition residuals,
//! orthonormality/completeness checks on wave-packet smearings, and an
//! independent time-domain transport oracle on a grid.
//!
//! Start from the `examples/` directory; each example exercises one major
//! capability. The `wqed` binary exposes the same functionality as
//! figure-data emitters and verification suites.

pub mod cli;
pub mod eigenbasis;
pub mod eigenstate;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod single_photon;
pub mod smatrix;
pub mod tevolve;
pub mod verification;
pub mod wavepacket;

pub use error::{Error, Result};
pub use model::{
    even_odd_coupling, kinematics_from_momenta, make_params, ModelParams, PairKinematics, Quantity,
};
