//! The characteristic-zero resolution driver: the invariant `Fc`, center
//! selection and the chart-tree trace.

mod driver;
pub mod invariant;
mod level;

pub use driver::{resolve, MaxLocus, ResolutionState, Status, Trace, TraceLeaf, TraceStep};
pub use invariant::{monomial_center, Gamma, InvariantValue, Terminator};
