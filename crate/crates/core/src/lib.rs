//! Exact construction and certification of infinite staircases in the
//! ellipsoid embedding capacity of one-point blowups of the projective plane.
//!
//! Everything is computed with arbitrary-precision integers, rationals and
//! elements of real quadratic fields. Floating point appears only in
//! display helpers.

pub mod accum;
pub mod capacity;
pub mod cfrac;
pub mod classes;
pub mod cli;
pub mod cremona;
pub mod error;
pub mod exact;
pub mod obstruct;
pub mod staircase;
pub mod symmetry;

pub use classes::{ClassVector, QuasiPerfect};
pub use error::{Error, Result};
pub use exact::{QuadExt, Rational};
pub use staircase::{Base, Dir, Family, PreStaircase};
pub use symmetry::GroupElem;
