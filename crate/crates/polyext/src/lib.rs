//! Numerical toolkit for fractional-order Poisson extensions to the upper
//! half space, the fractional Laplacian, and the weighted polyharmonic
//! operators attached to them.
//!
//! The computational core works in radial Fourier variables: for x-radial
//! trace data the extension factorizes per mode through a Bessel-type
//! multiplier, so the ambient dimension enters only through the radial
//! measure. Physical-space paths (kernel quadrature, weighted Hardy
//! quotients) exist alongside as independent cross-checks, and the
//! `report` module assembles everything into machine-readable
//! verification suites.

pub mod error;
pub mod extension;
pub mod field;
pub mod functionals;
pub mod hankel;
pub mod kernel;
pub mod orders;
pub mod physical;
pub mod quad;
pub mod report;
pub mod specfun;

pub use error::{Error, Result};
pub use orders::{make_order, FractionalOrder, HardyParams};
