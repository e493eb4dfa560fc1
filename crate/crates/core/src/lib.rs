//! Computations in regular `Z^n`-free groups given as towers of
//! HNN-extensions over a free group.

pub mod abelian;
pub mod axioms;
pub mod complex;
pub mod ball;
pub mod cyclic;
pub mod fixtures;
pub mod length;
pub mod lexvec;
pub mod tower;
pub mod validate;
pub mod weights;
pub mod words;

pub use lexvec::{LexVec, LexVecError};
pub use tower::{TowerError, TowerPresentation};
pub use words::{Group, Letter, Side, Word};
