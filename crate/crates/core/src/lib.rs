pub mod amenability;
pub mod cache;
pub mod characters;
pub mod config;
pub mod error;
pub mod families;
pub mod geometry;
pub mod params;
pub mod powers;
pub mod semiring;
pub mod towers;

pub use error::{Error, Result};
pub use semiring::{big_ln, FamilyId, FusionElement, FusionRules, FusionSystem, Terms};

/// Engine version recorded in command-line reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
