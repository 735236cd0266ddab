//! Greedy feature selection for robot visual localization over a
//! prediction horizon.
//!
//! The pipeline: a linear motion model yields a stacked horizon prior
//! ([`motion`]); a bearing-vector camera model turns each candidate 3D
//! feature into an additive information-matrix increment ([`vision`]);
//! and the selectors in [`selection`] pick the `q` most informative
//! features under a normalized log-determinant objective — classic
//! greedy, a sampled stochastic greedy, a trace-surrogate that scores
//! features by frame count alone, and an exhaustive oracle for small
//! instances. [`scenario`], [`runner`] and [`report`] form the benchmark
//! harness behind the `featsel` CLI.

pub mod motion;
pub mod numerics;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod selection;
pub mod testgen;
pub mod vision;

pub use motion::{HorizonPrior, MotionModel};
pub use numerics::SymmetricMatrix;
pub use report::{BenchReport, ReportFormat, ReportRow};
pub use runner::run_benchmark;
pub use scenario::{Algorithm, Scenario, ScenarioConfig};
pub use selection::{Measures, Objective, SelectionResult};
pub use vision::{CameraRig, FeatureInfo, FeatureTrack, PoseSequence};
