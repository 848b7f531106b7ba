//! Planar harmonic mappings of the unit disk and their convolutions.
//!
//! The crate builds slanted half-plane and strip mappings as truncated power
//! series, convolves them, evaluates the closed-form dilatations of the
//! convolutions, and checks the resulting bounds by exact coefficient
//! identities, Cohn reduction of polynomials, and dense sampling.

pub mod convolution;
pub mod error;
pub mod geometry;
pub mod mappings;
pub mod mapspec;
pub mod report;
pub mod rootcheck;
pub mod series;
pub mod verify;

pub use convolution::{harmonic_convolve, MobiusDilatation, PointwiseMap};
pub use error::{Error, Result};
pub use geometry::{BoundaryCurve, CheckReport};
pub use mappings::{DilatationSpec, HarmonicMap};
pub use rootcheck::{BlaschkeClass, ComplexPolynomial};
pub use series::PowerSeries;
