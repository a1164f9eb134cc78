//! Exact partition functions, dimer counts and free energies of the Ising model,
//! each cross-checked against brute-force enumeration.

pub mod chain1d;
pub mod cli;
mod error;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod pfaffian;
pub mod spectral;
pub mod startriangle;
pub mod thermo;
pub mod transfer2d;

pub use error::{Error, Result};
pub use model::{
    dual_coupling, Boundary, Geometry, LatticeSpec, Method, MethodResult, ReducedCouplings, K_C,
};
pub use numeric::SignedLog;
