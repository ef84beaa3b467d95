//! Symbolic computation with ℚ-Rees algebras over affine polynomial charts,
//! together with a characteristic-zero resolution driver that emits
//! verifiable traces (chart trees, centers, invariant values).

pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod groebner;
pub mod ideal;
pub mod parse;
pub mod poly;
pub mod problem;
pub mod rees;
pub mod resolution;
pub mod saturation;
pub mod weight;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use ideal::{ClosedSet, Ideal};
pub use poly::{Polynomial, Ring};
pub use rees::{Generator, QReesAlgebra};
pub use weight::{Extended, Weight};
