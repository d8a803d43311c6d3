//! Desk-scale workbench for nanophotonic single-photon-source experiments.
//!
//! The crate covers both sides of such an experiment:
//!
//! * **Platform math** — exact HE11 modes of air-clad nanofibers
//!   ([`fiber_modes`]), heat-and-pull taper kinematics ([`taper`]) and
//!   ion-exchanged graded-index waveguides ([`ion_exchange`]).
//! * **Measurement pipeline** — stochastic photon-stream generation through an
//!   HBT detection chain ([`emitter_sim`]) and the analysis side: streaming
//!   correlation, pulsed/CW g²(τ) protocols, saturation, spectral and
//!   polarization fits ([`photon_stats`]).
//!
//! All computations are deterministic: solvers use fixed scan/refinement
//! schedules and simulations are seeded.

pub mod emitter_sim;
pub mod error;
pub mod fiber_modes;
pub mod fit;
pub mod ion_exchange;
pub mod photon_stats;
pub mod special;
pub mod taper;

pub use error::{Error, Result};
