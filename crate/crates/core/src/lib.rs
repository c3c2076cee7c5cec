//! Knot homology engine: Khovanov homology (with the Lee deformation and the
//! s-invariant) from planar diagrams, knot Floer homology (with tau) of (1,1)
//! knots from K(p,q,r,s) parameters and L-space staircases, classical
//! polynomial invariants as independent cross-checks, and a correspondence
//! checker comparing the delta-graded ranks of the two theories.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod algebra;
pub mod diagram;
pub mod error;
pub mod fkcheck;
pub mod hfk;
pub mod invariants;
pub mod khovanov;

pub use error::{Error, InputError, InvariantError, Result};
