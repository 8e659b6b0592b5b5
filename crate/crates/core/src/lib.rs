//! Numerical toolkit for the p-modulus and p-capacity estimates of lower Q-homeomorphisms
//! of the plane: ring norms and extremal densities, annulus moduli and capacities, the
//! area-distortion bound for images of disks, point-behaviour estimates, and the
//! finite-Lipschitz scaling law, each checked against radial test maps.

pub mod capacity;
pub mod distortion;
pub mod error;
pub mod integration;
pub mod modulus;
pub mod plane;
pub mod report;
pub mod test_maps;
pub mod verification;

pub use error::{Error, Result};
pub use integration::{Quadrature, QuadratureSpec};
pub use modulus::{Degeneracy, Estimate, ModulusBound, RadialDensity};
pub use plane::{Annulus, ExponentP, PlanePoint, PolarGrid, QField, RingCondenser};
pub use test_maps::RadialMap;
pub use verification::{Check, Status, VerificationReport};
