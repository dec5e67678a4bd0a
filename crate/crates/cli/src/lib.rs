//! Scenario files, presets, output writers and the self-check behind the
//! `curlforce` binary.

pub mod checks;
pub mod error;
pub mod normalize;
pub mod output;
pub mod presets;
pub mod run;
pub mod scenario;

pub use error::{CliError, Result};
pub use scenario::{parse_scenario, Scenario};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/scenarios.md")]
mod book_scenarios {}
