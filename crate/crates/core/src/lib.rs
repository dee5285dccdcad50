//! Exact-arithmetic toolkit for moduli of line arrangements with a fixed
//! restriction line: projective geometry of the arrangements, weight
//! domains and walls, stable degenerations as rooted trees of planes,
//! iterated-blow-up bookkeeping, and cycle coefficients under the
//! stabilizer group of the restriction line.

pub mod chow;
pub mod feasibility;
pub mod linalg;
pub mod projgeom;
pub mod rational;
pub mod sha;
pub mod weights;
pub mod wonderful;
