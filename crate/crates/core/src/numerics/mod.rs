//! Grids, special functions, constants and log-radial Fourier quadrature.

mod bessel;
mod constants;
mod csv_io;
mod gauss;
pub(crate) use gauss::gl_ref;
mod grid;
mod hankel;
mod logconv;

pub use bessel::{bessel_j, jn, MAX_BESSEL_ORDER};
pub use constants::{constants, sphere_measure, Constants};
pub use csv_io::{read_two_column, write_two_column};
pub use gauss::{gauss_legendre, integrate_panels};
pub use grid::{make_log_grid, Dimension, LogGrid, RadialGrid};
pub use hankel::{
    bessel_moment, hankel_radial, radial_analysis, radial_synthesis, FnSpectrum, QuadOptions,
    RadialField, RadialSpectrum, SampledSpectrum,
};
pub use logconv::{LogHankel, RadialTable};
