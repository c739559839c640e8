//! Exact symbolic engine for finite free associative conformal algebras and
//! their extending structures.

pub mod classify;
pub mod conformal;
pub mod equiv;
pub mod error;
pub mod extend;
pub mod flag;
pub mod format;
pub mod linsolve;
pub mod poly;
pub mod repchecks;
pub mod report;
pub mod sample;

pub use conformal::{BilinearMap, ConformalAlgebra, Element, LambdaElement, ProductVariable};
pub use error::{Error, Result};
pub use poly::{LinearSubstitution, Poly, Rational, Var};
pub use report::{Item, Report, Status, Summary};
