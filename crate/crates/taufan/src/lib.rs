//! taufan: an exact-arithmetic engine for the tau-tilting theory and
//! wall-and-chamber structure of finite-dimensional bound quiver algebras.
//!
//! Given an algebra presented as a quiver with admissible relations over Q or
//! F_p, the engine computes tau-rigid and tau-tilting pairs, the mutation
//! graph and its Hasse poset, g- and c-matrices with their fan of cones,
//! torsion classes, King stability spaces, walls, chambers, and brick labels.
//! All arithmetic is exact (arbitrary-precision rationals or prime-field
//! residues); floating point appears only when figures are serialized.
//!
//! Desk-scale brute-force oracles (submodule enumeration, indecomposable
//! catalogs) cross-validate the structural computations.

pub mod algebra;
pub mod budget;
pub mod catalog;
pub mod error;
pub mod field;
pub mod geom;
pub mod gfan;
pub mod linalg;
pub mod render;
pub mod rep;
pub mod report;
pub mod stability;
pub mod tau;

pub use algebra::{parse_algebra, AnyAlgebra, BoundQuiverAlgebra};
pub use budget::Budget;
pub use error::{Result, TaufanError};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
