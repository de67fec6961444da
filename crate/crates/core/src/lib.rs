//! Forward current operators for the olfactory cilium and the explicit
//! reconstruction of the channel density on a geometric mesh.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its arguments; file formats and the command-line front end live in the
//! `cilia` crate.
//!
//! Layout, bottom up:
//!
//! - [`special`]: `erfc`, its inverse, Hill's function and its Taylor
//!   coefficients.
//! - [`kernel`]: physical parameters, step partitions, concentration
//!   profiles and the two approximate kernels.
//! - [`forward`]: densities, cumulative functions and the current operators.
//! - [`reconstruction`]: the inverse map on the geometric mesh.
//! - [`analysis`]: Mellin symbols, norm families and inequality verifiers.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod forward;
pub mod kernel;
mod math;
pub mod quadrature;
pub mod reconstruction;
pub mod special;

pub use error::{Error, Result};

pub use forward::{Density, Hill8, SampledSignal, Tabulated};
pub use kernel::{GeometricMeshSpec, PhysicalParams, PolynomialKernel, StepPartition};
pub use reconstruction::{DensityEstimate, ReconstructionMesh};

pub use special::HillParams;
