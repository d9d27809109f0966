//! Semisimplicity certificates for the degree-zero quantum cohomology of
//! smooth toric Fano manifolds whose defining polytope is facet-symmetric.

pub mod cli;
pub mod config;
pub mod critsolve;
pub mod error;
pub mod hessian;
pub mod laurent;
pub mod linalg;
pub mod polytope;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use config::{Config, OutputFormat, Precision};
pub use error::{Error, Result};
pub use polytope::{Facet, FamilyExpr, LatticePolytope, LatticeVector};
