//! Exact arithmetic for p-adic power series of logarithmic order, their
//! projective systems of remainders, and admissible distributions.

pub mod distribution;
pub mod eisenstein;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod projsys;
pub mod series;
pub mod weierstrass;

pub use distribution::Distribution;
pub use eisenstein::{DirichletCharacter, QExpansion};
pub use error::{Error, Result};
pub use growth::{GrowthClass, Window, WindowPoly};
pub use padic::{CycloField, CycloScalar, Prime, Val, Valuation, Q, Z};
pub use poly::Poly;
pub use projsys::{ComponentFamily, WindowSystem};
pub use series::{Bound, BoundTerm, TruncSeries, ValuationReport};
