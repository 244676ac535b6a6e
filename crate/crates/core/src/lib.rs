//! Finite model theory for monotone modal logic.
//!
//! Formulas in negation normal form, finite Kripke and neighborhood
//! structures, τ-bisimulations and morphisms, monotonicity and positivity
//! analysis, and maximal bisimulation products.

pub mod bisim;
pub mod error;
pub mod formula;
pub mod guard;
pub mod positivity;
pub mod product;
pub mod repro;
pub mod sample;
pub mod structures;

pub use error::{Error, Result};
pub use formula::{parse, print, Formula, Literal, LiteralSet, Var};
pub use guard::Guards;
pub use structures::{Frame, KripkeFrame, Model, NbdFrame, Relation, Valuation, WorldSet};
