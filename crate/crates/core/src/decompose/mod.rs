//! Greedy profile decomposition: low-frequency strip, profile coordinates,
//! scale extraction, core extraction with a finite η surrogate, sphere
//! averaging and the stability ledger.

mod coords;
mod cores;
mod ledger;
mod pipeline;
mod scales;
mod sphere;

pub use coords::{from_profile_coords, strip_low_freq, to_profile_coords, SpectralField, Stripped};
pub use cores::{core_candidates, eta_surrogate, extract_cores, CoreExtraction, CoreOptions, EtaSurrogate, ExtractedCore};
pub use ledger::{stability_ledger, LedgerRecord};
pub use pipeline::{decompose_full, DecomposeConfig, DecompositionReport, RecoveredTriple, ScaleRecord, StageNorms};
pub use scales::{extract_scales, ExtractedScale, ScaleExtraction, ScaleOptions};
pub use sphere::{cosine_profile, radial_profile, sphere_average, SphereAverage};
