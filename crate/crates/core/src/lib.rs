pub mod acceptance;
pub mod charfn;
pub mod cli;
pub mod deltas;
pub mod error;
pub mod grassmann;
pub mod json;
pub mod polyz;
pub mod random;
pub mod scalar;
pub mod superring;
pub mod supermatrix;
pub mod symspaces;
pub mod vzforms;

pub use error::{Error, Result};
pub use grassmann::{GrassmannElement, Parity, Rational};
pub use superring::{SuperPolynomial, Variable, VariableTable};
