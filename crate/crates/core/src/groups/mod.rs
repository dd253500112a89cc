//! Groups, compact regions, Haar measure, K-boundaries and Van Hove sequences.

mod element;
mod lattice;
mod ops;
mod region;
mod vanhove;

pub use element::{is_prime, GroupDescriptor, GroupElement, PadicNumber};
pub use lattice::{cell_union, lattice_discretize, Discretization, DiscretizationSummary};
pub use ops::{dilate, k_boundary, minkowski};
pub use region::{haar_measure, union_volume, CompactRegion, FiniteSet, PadicBall, RationalBox};
pub use vanhove::{dilated_sequence, product_sequence, van_hove_diagnostic, VanHoveReport, VanHoveRow, VanHoveSequence};
