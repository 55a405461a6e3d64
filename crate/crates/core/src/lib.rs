//! Numerical toolkit for the lack of compactness of H^N(R^2N) into the
//! exponential Orlicz space.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: grids, constants, Bessel functions and oscillation-aware
//!   Hankel quadrature in the log-radial variable.
//! * [`norms`]: Luxemburg (Orlicz) norm solver, Sobolev norms on the Fourier
//!   side, the dyadic B-norm and the Moser-Trudinger functional.
//! * [`synth`]: Moser functions, elementary concentrations, superpositions and
//!   spread remainders.
//! * [`diagnostics`]: log-oscillation, unrelatedness, orthogonality of triples
//!   and compactness at infinity.
//! * [`decompose`]: the greedy scale / core / profile extraction pipeline.
//! * [`cli`]: configuration, experiment dispatch and report emission.
//!
//! Plancherel convention: `û(ξ) = ∫ e^{-ix·ξ} u(x) dx` and all Sobolev norms
//! are normalized, `‖u‖²_{Ḣ^N} = (2π)^{-2N} ∫ |ξ|^{2N} |û(ξ)|² dξ`.

pub mod cli;
pub mod decompose;
pub mod diagnostics;
pub mod error;
pub mod norms;
pub mod numerics;
pub mod synth;

pub use error::{Error, Result};

/// Banner written into every report header.
pub const CONVENTION: &str =
    "plancherel=normalized: |u|^2_{H^N} = (2pi)^{-2N} int |xi|^{2N} |u^(xi)|^2 dxi";
