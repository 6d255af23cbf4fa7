//! Numerical calculus for a three-factor convolution tied to the
//! Fourier-cosine and Laplace transforms.
//!
//! The crate provides in layers:
//!
//! * [`numerics`] — adaptive Gauss–Kronrod quadrature on (0, ∞) with
//!   declared tail decay, plus an oscillation-aware cosine integrator;
//! * [`bessel`] — the modified Bessel function `K0`;
//! * [`functions`] — a catalogue of named test functions carrying analytic
//!   metadata (decay, integrability, closed transforms);
//! * [`transforms`] — cosine and Laplace transforms by quadrature, grids
//!   and cubic-spline sampled functions;
//! * [`polyconv`] — the three-factor convolution, its spectral
//!   factorization, and verification reports for its identities;
//! * [`watson`] — unitary integral operators built from the convolution
//!   with a second-order spectral multiplier;
//! * [`inequalities`] — weighted Young-type and reproducing-kernel norm
//!   inequalities checked by quadrature;
//! * [`solvers`] — closed spectral solutions of four integral-equation
//!   families, with residual audits;
//! * [`report`] — the row/report types every checker returns.

pub mod bessel;
pub mod error;
pub mod functions;
pub mod inequalities;
pub mod numerics;
pub mod polyconv;
pub mod report;
pub mod solvers;
pub mod transforms;
pub mod watson;

pub use error::{Error, Result};
