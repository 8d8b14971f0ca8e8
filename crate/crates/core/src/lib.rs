//! Minimal-time recirculation control for a planar landfill bioremediation
//! model.
//!
//! The library builds the complete optimal synthesis for steering the pair
//! of substrate concentrations into a rectangular target in minimal time:
//! the domain partition and its boundary curve, the two switching curves,
//! the singular-arc landmarks and the regime-dependent feedback laws, plus a
//! closed-loop simulator with switching-structure extraction. An independent
//! semi-Lagrangian grid solver and an exhaustive arc-structure search act as
//! brute-force oracles for validating the synthesis.

pub mod config;
pub mod curve;
pub mod error;
pub mod export;
pub mod extremal;
pub mod geometry;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod runner;
pub mod simulate;
pub mod svg;
pub mod synthesis;

pub use config::CaseConfig;
pub use curve::CurveGraph;
pub use error::Error;
pub use geometry::{BuildConfig, Partition, Regime, RegionTag, SingularArcInfo};
pub use model::{check_hypotheses, GrowthLaw, ModelParams, SolubilizationLaw, State, TargetBox};
pub use ode::{IntegratorConfig, Method};
pub use simulate::{FeedbackLaw, Trajectory};
pub use synthesis::{ControlDecision, SynthesisGeometry};
