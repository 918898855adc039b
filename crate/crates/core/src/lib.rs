//! Measurable bounds on concurrence-type entanglement measures.
//!
//! Index convention: matrices are row-major and the first tensor factor is
//! the most significant digit of a basis index. Two-copy operators act on
//! (system factors, then primed copy factors), e.g. `A B A' B'`.

pub mod bounds;
pub mod concurrence;
pub mod conjugate;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod observables;
pub mod random;
pub mod scan;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Dims, C64};
pub use states::{DensityMatrix, PureState, RotParams};
