//! Exact open-closed Hochschild cochains with brace, cyclic brace and BV operations.

pub mod brace;
pub mod bv;
pub mod builder;
pub mod cochain;
pub mod cohomology;
pub mod combinat;
pub mod cyclic;
pub mod engine;
pub mod error;
pub mod expr;
pub mod field;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod ocha;
pub mod oracle;
pub mod random;
pub mod sign;
pub mod suites;
pub mod symplectic;

pub use cochain::{CeTower, CochainTower, Component, Window, Witness};
pub use error::{OchaError, Result};
pub use field::{Field, FieldKind, Fp, Rational};
pub use graded::{Element, GradedSpace, OcSpaces};
pub use sign::Permutation;
pub use expr::{Arg, Expr};
pub use linalg::Matrix;
pub use symplectic::{CyclicContext, SymplecticForm};
