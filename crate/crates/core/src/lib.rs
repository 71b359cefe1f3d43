//! One-loop closed-time-path effective theory of the Coulomb field in a
//! homogeneous non-relativistic electron gas.
//!
//! The numerical kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix them to `f64`, which is what the
//! command-line front end uses.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ctp_green;
pub mod error;
pub mod modes;
pub mod oracles;
pub mod output;
pub mod params;
pub mod quad;
pub mod response;
pub mod roots;
pub mod scalar;
pub mod scan_fit;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PlasmaParams = params::PlasmaParams<f64>;
pub type DerivedScales = params::DerivedScales<f64>;
pub type ModePoint = response::ModePoint<f64>;
pub type ResponseValue = response::ResponseValue<f64>;
pub type DensityMatrixFactor = response::DensityMatrixFactor<f64>;
pub type CtpMatrix<E> = ctp_green::CtpMatrix<E>;
pub type PropagatorEntry = ctp_green::PropagatorEntry<f64>;
pub type QuadratureSpec = oracles::QuadratureSpec<f64>;
pub type DispersionCurve = modes::DispersionCurve<f64>;
pub type CrossoverScales = modes::CrossoverScales<f64>;
pub type ScanResult = scan_fit::ScanResult<f64>;
pub type PowerLawFit = scan_fit::PowerLawFit<f64>;

pub type PlasmaParamsF32 = params::PlasmaParams<f32>;
pub type ModePointF32 = response::ModePoint<f32>;

pub use ctp_green::Statistics;
pub use modes::{Branch, ContinuumRegion, MapQuantity};
