//! Gaussian-family approximations to the sinc phase-matching function of
//! spontaneous parametric down-conversion (SPDC).
//!
//! The crate answers two questions about the biphoton state:
//!
//! * how close is the state built with an approximated phase-matching
//!   function (Gaussian, super-Gaussian, cosine-Gaussian, cosine-super-Gaussian)
//!   to the exact sinc state, and which factors make it closest
//!   ([`fidelity`]);
//! * what are the Laguerre-Gaussian coincidence amplitudes of the
//!   Gaussian-approximated state, in closed form and by direct quadrature
//!   ([`lgdecomp`]).
//!
//! Every closed form is paired with an independent quadrature route so the
//! two can be checked against each other.

pub mod error;
pub mod fidelity;
pub mod lgdecomp;
pub mod model;
pub mod numerics;
pub mod preset;

pub use error::{Error, Result};
pub use model::{ApproxSpec, ArgumentKind, CrystalOptics, Family, PumpSpec, TransverseKinematics};
pub use numerics::{OptimResult, QuadSpec};
