//! Recover the output recurrence of a hidden linear system from a scalar
//! time series.
//!
//! A discrete system `x(i+1) = A·x(i) (+ b)`, `yᵢ = c·x(i)` with an
//! observable pair `(A, c)` produces outputs obeying
//! `y_{m+n} = −a₀y_m − … − a_{n−1}y_{m+n−1} (+ b̃)`, where the `aᵢ` are the
//! coefficients of the characteristic polynomial of `A`. Those coefficients
//! are solved from a single `n×n` Hankel window of the series, so `2n`
//! samples suffice. Sampled continuous systems reduce to the discrete case
//! through `B = e^{λA}`.
//!
//! Modules:
//! - [`numkit`]: matrices, LU/QR, matrix exponential, polynomials and roots.
//! - [`dynsys`]: system descriptions, simulation, observability and Krylov matrices.
//! - [`ident`]: Hankel identification, prediction, stability, spectrum recovery.
//! - [`experiments`]: seeded Monte Carlo checks of genericity properties.
//! - [`cli`]: file formats and the command-line front end.

pub mod cli;
pub mod dynsys;
pub mod error;
pub mod experiments;
pub mod ident;
pub mod numkit;

pub use error::{Error, Result};
