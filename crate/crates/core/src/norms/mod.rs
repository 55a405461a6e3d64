//! Orlicz (Luxemburg) norm, Sobolev norms on the Fourier side, `L^p` norms,
//! the dyadic B-norm and the exponential-square functional.

mod dyadic;
mod orlicz;
mod sobolev;
mod witness;

pub use dyadic::{b_norm, block_range, dyadic_ledger, DyadicLedger, K_FLOOR};
pub use orlicz::{
    lp_norm, mt_functional, orlicz_functional, orlicz_norm, orlicz_power_series, MeasuredSamples,
    NormRecord, EXP_CAP,
};
pub use sobolev::{sobolev_norm, sobolev_norm_sampled};
pub use witness::{orlicz_from_b_witness, synthesized_orlicz, WitnessRatio};
