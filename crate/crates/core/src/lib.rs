//! Exact symbolic engine for Lie-Rinehart algebras, their enveloping
//! algebroids, twisted deformations, jet-space duals and the Drinfeld
//! functors between quantum universal enveloping algebroids and quantum
//! formal series algebroids.

pub mod arith;
pub mod axb;
pub mod deform;
pub mod drinfeld;
pub mod envelope;
pub mod error;
pub mod jets;
pub mod lie_rinehart;
pub mod properties;
pub mod specfile;
pub mod report;
pub mod tensorial;

pub use arith::{CPoly, HLaurent, HSeries, Mono, Rational};
pub use error::{Error, Result};
pub use lie_rinehart::LieRinehartSpec;
pub use envelope::{EnvElement, Envelope};
pub use report::{Check, Report, Status};
pub use tensorial::Tensor;
