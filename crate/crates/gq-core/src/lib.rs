//! A computational workbench for small finite generalized quadrangles:
//! constructions from finite-field linear algebra, automorphism groups,
//! point-regular (Singer) subgroups and their multipliers, fixed-structure
//! counting, and exact-arithmetic parameter sweeps.

pub mod bits;
pub mod bounds;
pub mod centralizers;
pub mod constructions;
pub mod geoaut;
pub mod incidence;
pub mod perm;
pub mod singer;

pub use incidence::{classify_thin, validate_gq, GQOrder, Gq, GridShape, IncidenceStructure};
pub use perm::{PermGroup, Permutation};
