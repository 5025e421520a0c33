//! Numerical toolkit for continuous-variable quantum teleportation with
//! photon-subtracted (PS) and photon-added (PA) two-mode squeezed coherent
//! (TMSC) resource states.
//!
//! Everything is phrased in terms of Wigner characteristic functions
//! `chi(Lambda) = Tr[rho exp(-i Lambda^T Omega xi)]` with `hbar = 1` and
//! vacuum covariance `1/2`. The crate provides two fully independent routes
//! to every quantity of interest:
//!
//! * closed forms built from two-variable Hermite polynomials and a small
//!   truncated-power-series (jet) engine ([`resource`], [`teleport`]);
//! * a brute-force truncated Fock-space simulation of the preparation
//!   circuits and the teleportation overlap integral ([`fock`]).
//!
//! The two routes agree to better than 1e-5 relative on the full supported
//! parameter range; the test suite enforces this. See `TRANSCRIPTION-NOTES.md`
//! at the repository root for the conventions used by the closed forms.

// small fixed-size matrix assembly reads best with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod quad;
pub mod resource;
pub mod special;
pub mod teleport;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

pub use error::{Error, Result};
pub use fock::{DetectorOutcome, FockTensor, OracleConfig};
pub use gaussian::{GaussianState, PhasePoint, SymplecticMatrix};
pub use resource::{CoefficientSet, EvalPath, ResourceKind, ResourceSpec};
pub use special::jet::Jet;
pub use teleport::{FidelityReport, InputState};
