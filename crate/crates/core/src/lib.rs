//! Exact elimination-matrix engine for rational curve and surface
//! parameterizations.
//!
//! The crate builds matrix representations `M_nu` of a rational map from
//! graded syzygies of its defining forms, together with a certificate for
//! the degree region in which `corank(M_nu(p))` equals the degree of the
//! fiber over `p`. On top of that sit implicitization (determinants and
//! GCDs of maximal minors), fiber-degree and Fitting-stratum queries,
//! detection of contracted curves through Jacobian minors, and orthogonal
//! projection onto a parameterized surface via its congruence of normal
//! lines.
//!
//! All arithmetic is exact, over the rationals or a prime field.

pub mod congruence;
pub mod exactlinalg;
pub mod field;
pub mod fiberlab;
pub mod implicitize;
pub mod matrixrep;
pub mod oracle;
pub mod polyring;
pub mod selftest;
pub mod syzygy;

pub use field::{Field, PrimeField, Rationals};
pub use polyring::{MultiDeg, Parameterization, Poly, RingSpec};
