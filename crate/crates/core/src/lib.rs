//! Transverse electric conductivity of a collisional (BGK) quantum plasma.
//!
//! All conductivities are dimensionless ratios `σ/σ₀`. The degenerate case
//! uses Fermi-normalized `(x, y, q)`; the general case uses thermal
//! normalization plus the degeneracy parameter `alpha`.

pub mod degenerate;
pub mod error;
pub mod fermi;
pub mod general;
pub mod lindhard;
pub mod params;
pub mod quad;

pub use error::{Error, Result};
pub use params::{ComplexValue, DegenerateParams, GeneralParams, KineticAux};

/// Default relative quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
