//! Ambush-avoiding stochastic routing.
//!
//! A convoy (BLUE) travels between a fixed origin and destination while an
//! adversary (RED) picks one ambush area. BLUE's mixed strategy is a unit
//! flow `p` over a directed network laid on the terrain; RED's is a
//! distribution `q` over ambush areas. The crate builds the network, derives
//! per-node ambush outcomes from terrain and vehicle speed, solves the
//! min-max game as a linear program, and evaluates the result.
//!
//! The usual pipeline:
//!
//! 1. [`environment`]: terrain, vehicle, mission, outcome map, ambush areas.
//! 2. [`network`]: node sampling, connectivity, and the `A`, `b`, `D`, `S`
//!    matrices.
//! 3. [`game`]: LP assembly, revised simplex, RED best response.
//! 4. [`analysis`]: metrics, cycle cancellation, path decomposition and
//!    Monte Carlo verification.
//! 5. [`io`]: terrain/road/scenario readers and GeoJSON/SVG/CSV writers.
//!
//! [`pipeline`] wires these together for a [`io::scenario::Scenario`], and
//! [`cli`] exposes the pipeline as the `ambush` binary.

pub mod analysis;
pub mod cli;
pub mod environment;
pub mod error;
pub mod game;
pub mod geom;
pub mod io;
pub mod network;
pub mod pipeline;
pub mod sparse;

pub use error::{Error, Result};
pub use geom::{Bounds, Point};

/// Primal feasibility tolerance shared by the solver and the flow checks.
pub const PRIMAL_TOL: f64 = 1e-8;
/// Dual feasibility (reduced cost) tolerance.
pub const DUAL_TOL: f64 = 1e-9;
/// Ties in RED's best response are resolved within this tolerance.
pub const TIE_TOL: f64 = 1e-9;
/// Default energy coefficient.
pub const DEFAULT_LAMBDA: f64 = 1e-4;
/// Default threshold for an area to count as entered in the spreading metric.
pub const DEFAULT_P_MIN: f64 = 1e-3;
