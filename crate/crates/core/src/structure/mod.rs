//! Algebroid specs, their file format, and the axiom suites.

mod checks;
mod corrupt;
mod io;
mod report;
mod sampler;
mod spec;

pub use checks::{check_axioms, CheckOptions, Fixture, Suite};
pub use corrupt::{corrupt_bracket, corrupt_gram, corrupt_twist};
pub use io::{load_spec, load_spec_file, spec_to_json, spec_to_value};
pub use report::{AxiomCheck, AxiomRun, CheckReport, Status, Witness, WitnessValue};
pub use sampler::Sampler;
pub use spec::{apply_vector_field, vector_field_bracket, AlgebroidSpec, BaseRing, Kind, SpecParts};
