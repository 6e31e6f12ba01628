//! Universal structure of finite-time blow-up in one-dimensional scalar
//! conservation laws.
//!
//! - [`profile`]: the universal cusp profile w(t, x) and its scaling family.
//! - [`characteristics`]: exact classical solutions, blow-up time and the blow-up frame.
//! - [`renorm`]: the renormalization operator in x- and k-space, flux rescaling and
//!   convergence sweeps.
//! - [`spectral`]: log-Fourier fields, the solitary wave and its speed/growth fits.
//! - [`gas`]: the polytropic-gas simple wave.
//! - [`problems`]: built-in problems addressable by string id.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN

pub mod characteristics;
pub mod error;
pub mod fit;
pub mod gas;
pub mod model;
pub mod output;
pub mod problems;
pub mod profile;
pub mod renorm;
pub mod root;
pub mod solution;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
