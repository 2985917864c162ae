//! Orbit design for fleets of observer spacecraft.
//!
//! `orbitplan` plans the orbits of a set of observer agents so that the
//! worst-case observation quality over every face of every target is as
//! large as possible, subject to mission constraints (altitude bands,
//! co-orbital and trailing formations, collision avoidance, sun-synchronous
//! and frozen-orbit conditions).
//!
//! The crate is organized around five subsystems:
//!
//! - [`astro`] — two-body dynamics, Keplerian element algebra, fixed-step
//!   RK4 propagation, and the SSO / frozen-orbit closed forms.
//! - [`perception`] — the per-face observation quality metric (resolving
//!   power, illumination angle, Earth occlusion, sunlight, face visibility),
//!   the 4-D quality tensor and its cumulative reduction.
//! - [`constraints`] — the optimization parameter vector, scaling, and every
//!   constraint family as reusable objects.
//! - [`solver`] — an epigraph reformulation of the max-min program, a local
//!   augmented-Lagrangian NLP solver, and a deterministic multi-start driver.
//! - [`scenario`] — scenario definition, validation, JSON persistence and
//!   the built-in presets.
//!
//! The `orbitplan` binary (see [`cli`]) exposes `propagate`, `field`,
//! `optimize`, `report` and `constraints` subcommands on top of the library.
//! Runnable examples for each capability live in `examples/`.

pub mod astro;
pub mod cli;
pub mod constraints;
pub mod perception;
pub mod scenario;
pub mod solver;

/// 3-component double precision vector used for positions, velocities and
/// directions throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;
