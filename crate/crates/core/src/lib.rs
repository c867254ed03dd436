//! Numerical workbench for integral operators built from Hornich operations
//! on normalized analytic functions of the unit disk.
//!
//! The crate constructs the operator families
//! `C[f,g](z) = ∫_0^z (f(w)/w)^α (g'(w))^β dw`,
//! `I[f,g](z) = ∫_0^z (f'(w))^α (g'(w))^β dw` and
//! `J[f,g](z) = ∫_0^z (f(w)/w)^α (g(w)/w)^β dw`,
//! tests membership of the results in the convexity classes `K(λ)`, the
//! Ozaki classes `G(γ)` and the close-to-convex class via sampled analytic
//! criteria, and reproduces the sharp (α,β) parameter regions of the
//! underlying theorems on a grid, including the witnesses that make the
//! regions sharp.
//!
//! Modules:
//! - [`powerseries`]: truncated Taylor arithmetic (the series substrate);
//! - [`catalog`]: named analytic test functions with closed-form evaluators;
//! - [`operators`]: Hornich sum/scale and the C/I/J families, as series and
//!   as pointwise pre-Schwarzian evaluations;
//! - [`criteria`]: sampled-circle membership tests and arc-bound audits;
//! - [`regions`]: half-plane encodings of the theorem regions plus grid
//!   scans, sharpness checks and convexity audits;
//! - [`report`]: JSON/CSV/PGM serialization of scan reports;
//! - [`verify`]: the built-in verification suite driven by `verify-all`.

pub mod catalog;
pub mod criteria;
pub mod operators;
pub mod powerseries;
pub mod regions;
pub mod report;
pub mod verify;

pub use powerseries::{Series, SeriesError};
