//! Numerical engine for SU(2)_k topological data and its two realizations:
//! algebraic (fusion categories, braid representations, link invariants,
//! Turaev–Viro state sums) and field-theoretic (Chern–Simons / BF actions and
//! holonomies on a periodic grid, honeycomb tight-binding microscopics).

pub mod braid;
pub mod error;
pub mod field;
pub mod fusion;
pub mod graphene;
pub mod modular;
pub mod turaev;

pub use error::{Error, Result};
