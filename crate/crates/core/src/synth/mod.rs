//! Constructors for the explicit function families: Moser functions, their
//! profile generalizations, Fourier-side elementary concentrations,
//! superpositions and spread remainders.

mod angular;
mod families;
mod manifest;
mod physical;
mod profile;
mod shape;

pub use angular::{AngularProfile, Atom, Mode};
pub use families::{
    elementary_concentration, elementary_profile, general_moser, general_moser_at_log, moser,
    moser_at_log, moser_profile, moser_samples, spread_remainder, superpose, CoreLaw, FamilyEntry, ScaleLaw,
    ScaleTriple,
};
pub use manifest::{FamilyManifest, ProfileRef, RemainderSpec, SequenceFamily, TripleSpec};
pub use physical::{PatchOptions, PhysicalField, PhysicalSamples};
pub use profile::{Profile, ProfileKind, PRESETS};
pub use shape::{Shape, Window};
