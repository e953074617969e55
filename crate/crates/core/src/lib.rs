//! Exact computations for bound quiver algebras: normal-form path bases,
//! representations and Hom spaces, minimal projective resolutions and Ext,
//! Euler forms on the Grothendieck lattice, braid-group mutations of
//! exceptional sequences, and replayable certificates of numerical
//! nonextendability.

pub mod error;
pub mod homalg;
pub mod ktheory;
pub mod lattice;
pub mod linalg;
pub mod quiver;
pub mod report;
pub mod repr;
pub mod sample;
pub mod search;

pub mod cli;

pub use error::{Error, Result};
pub use quiver::{Algebra, BoundQuiver};
