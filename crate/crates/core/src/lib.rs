//! A multiplierless, orthogonal 16-point DCT approximation.
//!
//! The kernel uses only {−1, 0, 1}; a diagonal scaling makes it orthonormal.
//! Alongside the transform the crate provides:
//!
//! - [`fastdct`]: a 72-addition butterfly factorization with instrumented
//!   operation counts and word-length growth analysis,
//! - [`spectral`]: per-row error energies against the exact DCT,
//! - [`codec`]: a 16×16 block compression harness measuring PSNR, MSE and UQI,
//! - [`imageio`]: binary PGM input/output,
//! - [`cli`]: the commands behind the `approxdct` binary.
//!
//! ```
//! use approxdct::transforms::{build_proposed, N};
//!
//! let spec = build_proposed();
//! let y = spec.forward(&[1.0; N]);
//! assert!((y[0] - 4.0).abs() < 1e-12);
//! assert!(spec.orthogonality_error() < 1e-12);
//! ```

pub mod cli;
pub mod codec;
pub mod error;
pub mod fastdct;
pub mod imageio;
pub mod quadrature;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
