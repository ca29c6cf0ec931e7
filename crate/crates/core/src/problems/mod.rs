//! Reference problems with exact small answers, and independent brute-force oracles.

mod brackets;
mod diran;
mod factor;
pub mod oracles;

pub use brackets::{BracketVariant, Brackets};
pub use diran::{DirAnimalState, DirectedAnimals, Formulation};
pub use factor::FactorToy;
