//! Twisted conjugacy classes, Reidemeister numbers and twisted characters
//! for the group `Z² ⋊_A Z` with `A = [[2,1],[1,1]]` and the automorphism
//! `φ((m,k),n) = ((k,−m),−n)`.
//!
//! * [`intlat`]: exact integer matrices, Smith normal form, lattice queries.
//! * [`grp`]: the group law and twist endomorphisms.
//! * [`reid`]: deciding twisted conjugacy, class labels, Reidemeister
//!   numbers and Möbius congruences.
//! * [`reps`]: finite invariant orbits on the dual torus, induced
//!   representations and twisted characters.
//! * [`oracle`]: brute-force class discovery used to cross-check `reid`.
//! * [`parse`]: text syntax for twists and matrices.

pub mod grp;
pub mod intlat;
pub mod oracle;
pub mod parse;
pub mod reid;
pub mod reps;

pub use grp::{Elem, Group, Sign, Twist};
pub use intlat::{Cardinality, IntMat};
