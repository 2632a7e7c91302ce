//! Local symmetry analysis of manifolds carrying an absolute parallelism.
//!
//! The pipeline, bottom-up:
//!
//! - [`jet`]: truncated multivariate Taylor arithmetic, the differentiation engine.
//! - [`expr`]: the expression language used for frame components and observables.
//! - [`frame`]: structure functions, curvature and its iterated frame derivatives.
//! - [`killing`]: Killing generators, their dimensions, integrability probing and
//!   homogeneity verdicts.
//! - [`integrator`]: flows, transport of generators and construction of local
//!   Killing fields, with numerical verification.
//! - [`orbits`]: grid scans, strata of constant orbit dimension and orbit labels.
//! - [`invariants`]: consistency suites (bracket reconstruction, Jacobi, ...).
//!
//! Tolerances live in [`Numerics`].

pub mod error;
pub mod expr;
pub mod frame;
pub mod integrator;
pub mod invariants;
pub mod jet;
pub mod killing;
pub mod numerics;
pub mod orbits;

pub use error::{Error, Result};
pub use frame::{DerivedCurvature, FrameSpec, StructureTensor};
pub use killing::{HomogeneityReport, HomogeneityVerdict, KillingFiltration, ProbeResult};
pub use numerics::Numerics;
pub use orbits::{Grid, OrbitAtlas};
