//! Certified non-embeddability for finite simplicial complexes: obstructor
//! pair systems, deleted products, exact general-position intersection
//! counts, the mod-2 van Kampen obstruction, and a small calculus of
//! obstructor-dimension bounds for groups.

pub mod certifier;
pub mod cocycle;
pub mod complex;
pub mod constructors;
pub mod deleted_product;
pub mod digest;
pub mod error;
pub mod geometry;
pub mod gf2;
pub mod group;

pub use certifier::{certify, Certificate, PairSystem, Verdict};
pub use cocycle::{intersection_cochain, obstruction_vanishes, pair_with_cycle, IntersectionCochain, ObstructionClass, ObstructionReport};
pub use complex::{Complex, Simplex, Vertex};
pub use constructors::{build, build_with_limit, cone_spec, flores, join_spec, points3, vk, ObstructorSpec};
pub use deleted_product::{DeletedProduct, UnorderedCell};
pub use error::{Error, Result};
pub use geometry::{moment_map, GeneralPositionMap, Rational};
pub use group::{group_bound, obdim_lower_bound, Bound, Derivation, GroupExpr};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
