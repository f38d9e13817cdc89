//! Generalized Chebyshev dynamics on complex projective 3-space, Lie type A3.
//!
//! The library constructs the degree-`d` endomorphisms exactly over the
//! integers and realizes the geometry attached to them: the torus
//! parametrization and its alcove folding, bounded-orbit membership, orbit
//! classification, periodic-point enumeration with equidistribution
//! statistics, the maximal-entropy measure density, external and internal
//! rays, and the critical-value surfaces (astroidalhedron, tangent
//! developable, bowls, whiskers) with their binary-quartic bridge.

pub mod config;
pub mod critical;
pub mod dynamics;
pub mod emit;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod surfaces;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{build_map, ChebyshevMapA3, MultiPoly};
pub use torus::{AngleTriple, FoldWord, KStatus, SCoord, TorusPoint};
