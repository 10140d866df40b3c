//! Rotating-frame restricted three-body dynamics, periodic orbit detection and
//! numerical checks of the relation between an orbit's period and the integral
//! of `laplacian ln sqrt(2 omega - C)` over the region it encloses.

pub mod catalog;
pub mod curvegeom;
pub mod dynamics;
pub mod integrate;
pub mod periodarea;
pub mod periodicity;
pub mod scalar;
