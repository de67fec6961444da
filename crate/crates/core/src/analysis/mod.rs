//! Stability and identifiability diagnostics.
//!
//! - [`stability`]: the Mellin symbol `Lambda_m^gamma`, its infimum `C_gamma`
//!   and the sufficient threshold on `gamma`.
//! - [`mellin`]: numerical Mellin transforms of compactly supported functions.
//! - [`norms`]: `L^p`, BV and weighted Sobolev norms.
//! - [`inequalities`]: numerical verifiers for the continuity and stability
//!   estimates of `Phi_m` and `I_m`.
//! - [`lemma`]: the exact-integer scan behind the injectivity of `PI_m`.

pub mod inequalities;
pub mod lemma;
pub mod mellin;
pub mod norms;
pub mod stability;

pub use stability::{c_gamma, gamma0_bound, lambda_gamma, CGamma};
