//! Radial compressible Navier-Stokes in Lagrangian mass coordinates, with
//! run-time checks of the explicit a-priori estimates available for the
//! annular approximation scheme.

pub mod bridge;
pub mod cutoff;
pub mod data;
pub mod family;
pub mod interp;
pub mod monitors;
pub mod par;
pub mod params;
pub mod scalar;
pub mod solver;
pub mod weak;
