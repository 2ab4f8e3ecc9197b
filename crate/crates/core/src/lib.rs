//! Firefighter games on lattices.
//!
//! A fire starts at one or more vertices; each round the firefighter
//! protects a few vertices and then the fire spreads to every unprotected
//! neighbor. The crate provides the lattices, a deterministic game engine,
//! the classical strategies on the square, hexagonal and triangular
//! lattices, an exact solver for small instances and the surviving-rate
//! analysis that goes with them.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod hexcoord;
pub mod lattice;
pub mod service;
pub mod solver;
pub mod strategies;
pub mod vset;

pub use engine::{normalize_to_ball, BudgetSchedule, GameState, GameTrace, Outcome, RoundRecord};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeKind, Vertex};
