//! Coverage of MIMO decode-and-forward relay networks: ergodic rate bounds,
//! relay placement, polar coverage regions and two-relay cooperation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod cooperation;
pub mod coverage;
pub mod error;
pub mod matrixkit;
pub mod mc;
pub mod special;

pub use capacity::{Bounds, ChannelEnsemble, MinMode, RelayView, ScenarioConfig};
pub use channel::{FadingModel, LinkDistances, LosPrototype, NetworkGeometry, Sector};
pub use cooperation::{ExtensionFactor, ExtensionReport, HataParams, SumRateFit};
pub use coverage::{CoverageRegion, RadiusSolution, RateMetric, SolverConfig, SweepOptions};
pub use error::{Error, Result};
pub use matrixkit::ComplexMatrix;
pub use mc::{BoundEstimate, McConfig};
