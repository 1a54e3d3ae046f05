//! Simulation and numerical verification toolkit for symmetric alpha-stable
//! and truncated alpha-stable Levy processes on bounded open sets.
//!
//! The crate is organized around the pipeline
//! geometry -> process -> simulation -> estimation -> verification:
//!
//! - [`geom`]: the shape algebra (balls, boxes, unions, shells) with boundary
//!   distance, fatness witnesses, rough connectivity, Stolz regions.
//! - [`process`]: Levy densities, characteristic exponents, exact stable
//!   increment sampling.
//! - [`kernels`]: closed-form/quadrature reference quantities (ball Poisson
//!   kernel, ball Green oracle, exit kernels, comparison forms).
//! - [`simulate`]: exact walk-on-spheres for the stable process and a
//!   compound-Poisson + matched-Gaussian scheme for the truncated one.
//! - [`estimate`]: harmonic measure, Green functions by occupation-density
//!   KDE, exit times, Martin ratios, h-weighted expectations.
//! - [`verify`]: one suite per comparison theorem, with fitted constants and
//!   negative controls.

pub mod error;
pub mod estimate;
pub mod geom;
pub mod kernels;
pub mod process;
pub mod quad;
pub mod rngutil;
pub mod simulate;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use estimate::{GreenEstimate, HarmonicEval, MartinRatio, TargetSet};
pub use geom::{Annulus, BallShape, DomainSpec, FatnessCertificate, Point, Shape, StolzRegion};
pub use kernels::{EstimateForm, EstimateKind, PoissonKernelBall};
pub use process::{IncrementSample, LevyDensity, ProcessKind, ProcessSpec};
pub use simulate::{ExitSample, OccupationRecord, SchemeParams};
pub use verify::{TupleRecord, VerificationReport};
