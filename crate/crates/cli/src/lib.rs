//! Command-line front end and local HTTP service for the daylight engine.

pub mod api;
pub mod cli;
pub mod error;
pub mod run;
pub mod state;

pub use api::router;
pub use state::AppState;
