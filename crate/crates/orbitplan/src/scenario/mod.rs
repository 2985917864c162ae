//! Scenario definition, validation, persistence and presets.

pub mod presets;
mod schema;
mod validate;

pub use schema::*;
pub use validate::{validate, Violation};
