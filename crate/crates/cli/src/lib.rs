//! Scenario-driven front end: declarative run descriptions, named figure
//! presets, and deterministic CSV/JSON emission.

pub mod output;
pub mod presets;
pub mod runner;
pub mod scenario;
