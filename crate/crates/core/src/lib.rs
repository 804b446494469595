//! Fractal regular tetrahedra `A(c, P)`: the attractors of the iterated
//! function systems `x ↦ cPx + vᵢ` over the four vertices of a regular
//! tetrahedron.
//!
//! The crate is organised bottom-up:
//!
//! * [`geom`]: exact (rational, `ℚ(√2,√3)`) and floating scalars, 3-vectors,
//!   3×3 matrices, halfspace predicates and the fixed tetrahedral frame change.
//! * [`rotgroup`]: the tetrahedral and hexahedral rotation groups.
//! * [`frt`]: parameters, addresses, depth-`n` point clouds, the second-level
//!   system and the invariant ball.
//! * [`cube`]: imaginary-cube covers, projection coverage and edge witnesses.
//! * [`analysis`]: convex hulls, Hausdorff distance, symmetry checks, the
//!   separation bound, intersection/disjointness certificates and the piece
//!   graph.
//! * [`export`]: PLY, CSV, PGM, OBJ and DOT writers.

pub mod analysis;
pub mod cube;
mod error;
pub mod export;
pub mod frt;
pub mod geom;
pub mod rotgroup;

pub use error::{FrtError, Result};
pub use geom::{Mat3, Q23, Rational, Scalar, Sqrt23, Vec3};
pub use frt::{Address, FrtParams, PointCloud};
