//! Ahlfors functions and analytic capacity for planar domains.
//!
//! Closed forms cover the unit disk, the exterior of the unit disk and
//! complements of finitely many real intervals. Circle domains are handled by
//! a cutting-plane solver for the extremal problem
//! `sup{ |h'(p)| : h analytic on Ω, |h| ≤ 1 }`, and [`harness`] checks the
//! extremal's structural properties on any of them.

pub mod closed_form;
pub mod domain;
pub mod error;
pub mod function;
pub mod harness;
pub mod moebius;
pub mod quadrature;
pub mod solver;

pub use closed_form::{
    ahlfors_disk, ahlfors_exterior_disk, ahlfors_real_slit, capacity_real_slit,
    derivative_at_infinity, strip_map, AhlforsClosedForm, ClosedFormKind, QuadratureSpec,
};
pub use domain::{BasePoint, BoundarySample, Circle, Domain, DomainSpec, RealSlitSet};
pub use error::{Error, GeometryError, Result};
pub use function::AnalyticFunction;
pub use harness::{run_suite, CheckReport};
pub use moebius::{koebe_expand, sqrt_branch, KoebeExpansion, MoebiusTransform};
pub use num_complex::Complex64;
pub use solver::{
    build_basis, solve_extremal, valence, AhlforsSolution, BasisSpec, SolverConfig, ValenceCount,
};
