//! Verification-grade numerics for nonlocal fractional-calculus identities.
//!
//! The crate implements fractional Laplacians, fractional gradients and
//! divergences, and the identities tying them together, on two geometries:
//! the unit circle (spectral representation, trigonometric quadratures) and
//! the real line (compactly supported sampled functions).  On top of the
//! operators sit verification suites for structural identities of
//! half-harmonic map theory: divergence-free Noether currents of
//! sphere-valued maps, the holomorphic Hopf differential of the harmonic
//! extension, and Pohozaev-type integral identities on intervals and on the
//! circle.  Every suite computes each quantity by at least two independent
//! routes and reports the residual against a pinned tolerance.
//!
//! The library keeps a strict convention boundary: circle functions are
//! finite Fourier series with û(k) = (1/2π)∫u(θ)e^{−ikθ}dθ, line functions
//! are uniform-grid samples extended by zero, and every operator documents
//! the normalization it implements so the numbers in reports are
//! reproducible from the formulas alone.

pub mod error;
pub mod frac_div_circle;
pub mod frac_line;
pub mod hopf;
pub mod noether;
pub mod pohozaev;
pub mod report;
pub mod spectral_circle;
pub mod suite;

pub use error::{Error, Result};
