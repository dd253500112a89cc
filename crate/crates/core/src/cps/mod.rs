//! Cut-and-project schemes, model sets, uniform density and Meyer checks.

mod density;
mod meyer;
mod scheme;

pub use density::{
    fundamental_domain, lattice_of, uniform_density, DensityRow, DensityTrace, FundamentalDomain, LatticePreset, PointSource,
};
pub use meyer::{meyer_check, MeyerReport, MeyerStatus};
pub use scheme::{
    certify, enumerate_model_set, export_point_list, interval_query, parse_point_list, CpsCertificate, CutProjectScheme, EnumerationBound,
    Lattice, ModelSet, Window, WindowInterval,
};
