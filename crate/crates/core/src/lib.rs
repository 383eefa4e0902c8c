//! Orbit periods of the shift `σₓ` on `Hom(K, ℤ/p)` for knot groups.
//!
//! The pipeline goes presentation → Fox derivatives → Alexander matrix over
//! GF(p)[t] → Smith normal form → Jordan spectrum of the shift → closed-form
//! period set, and checks the result against an exact linear-algebra census
//! of the recurrence the Alexander matrix defines.

pub mod cli;
pub mod dynsys;
pub mod field;
pub mod foxcalc;
pub mod matrix;
pub mod pencil;
pub mod periods;
pub mod poly;

pub use field::{ExtElement, ExtField, FieldElement, PrimeModulus};
pub use poly::{Factorization, Poly};
